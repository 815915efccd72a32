#ifndef NONLOCLAW_NUMERIC_HPP
#define NONLOCLAW_NUMERIC_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace nonloclaw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Rejected input: a precondition of an operation does not hold.
class InvalidInput : public Error
{
public:
    using Error::Error;
};

/// A computation produced a NaN or Inf.
class NonFiniteValue : public Error
{
public:
    using Error::Error;
};

/// Compensated (Kahan-Babuska) accumulator. Summation order is the caller's
/// iteration order, so results are reproducible bit for bit.
class KahanSum
{
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    KahanSum& operator+=(double x)
    {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// sign with an exact zero: 1 for x > 0, 0 for x == 0, -1 for x < 0.
inline double sign0(double x)
{
    return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
}

/// Emits a warning to the current sink (stderr by default). After the first
/// 10 warnings further ones are only counted.
void warn(const std::string& message);
std::size_t warning_count();
void set_warning_sink(std::function<void(const std::string&)> sink);

/// Process-wide worker count used by the cell-parallel maps. Defaults to 1.
void set_thread_count(int n);
int thread_count();

/// Runs body(begin, end) over [0, n) split into contiguous chunks. Chunks are
/// disjoint, so bodies that write only to their own range are race free and
/// their results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace nonloclaw

#endif
