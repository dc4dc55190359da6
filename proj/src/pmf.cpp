#include "runs/pmf.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

#include "runs/kahan.hpp"

namespace runs {

double Pmf::sum() const noexcept {
    KahanSum s;
    for (double m : masses) s.add(m);
    return s.value();
}

double Pmf::mean() const noexcept {
    KahanSum s;
    for (std::size_t i = 0; i < masses.size(); ++i)
        s.add(static_cast<double>(offset + static_cast<long>(i)) * masses[i]);
    return s.value();
}

double Pmf::variance() const noexcept {
    const double mu = mean();
    KahanSum s;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        const double d = static_cast<double>(offset + static_cast<long>(i)) - mu;
        s.add(d * d * masses[i]);
    }
    return s.value();
}

bool Pmf::is_normalized(double tol) const noexcept {
    return std::abs(sum() - 1.0) <= tol;
}

void Pmf::clamp_tiny_negatives() noexcept {
    for (double& m : masses) {
        if (m < 0.0 && m >= -1e-14) {
            m = 0.0;
            ++clamped_negatives;
        }
    }
}

void Pmf::write_csv(std::ostream& os, int precision) const {
    os << "m,probability\n";
    const auto old = os.precision(precision);
    for (std::size_t i = 0; i < masses.size(); ++i)
        os << offset + static_cast<long>(i) << ',' << masses[i] << '\n';
    os.precision(old);
}

std::string Pmf::to_json() const {
    nlohmann::json j;
    j["offset"] = offset;
    j["masses"] = masses;
    return j.dump();
}

}  // namespace runs
