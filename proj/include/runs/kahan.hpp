#pragma once

namespace runs {

// Neumaier-compensated accumulator.  Downstream formulas add many terms of
// wildly different magnitude (and alternating sign in the closed-form PMF),
// so plain += loses digits we later assert on.  The compensation term also
// captures the case |addend| > |sum|, which classic Kahan mishandles.
class KahanSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    KahanSum& operator+=(double x) noexcept { add(x); return *this; }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_  = 0.0;
    double comp_ = 0.0;
};

}  // namespace runs
