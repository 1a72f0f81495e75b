#include "ppsim/types.hpp"

#include <cmath>

#include "ppsim/errors.hpp"

namespace ppsim {

void PointPattern::validate() const {
    if (!(window.b > window.a)) throw InvalidParams("point pattern: window must satisfy a < b");
    double prev = window.a;
    for (double t : times) {
        if (!std::isfinite(t) || t < prev || t > window.b)
            throw InvalidParams("point pattern: times must be sorted and inside (a, b]");
        prev = t;
    }
    if (!times.empty() && !(times.front() > window.a))
        throw InvalidParams("point pattern: times must be sorted and inside (a, b]");
}

InarParams::InarParams(double alpha0, std::vector<double> alphas, double tail_bound)
    : alpha0_(alpha0), alphas_(std::move(alphas)), tail_bound_(tail_bound) {
    if (!(std::isfinite(alpha0_) && alpha0_ >= 0.0))
        throw InvalidParams("inar params: alpha0 must be finite and >= 0");
    if (!(std::isfinite(tail_bound_) && tail_bound_ >= 0.0))
        throw InvalidParams("inar params: tail_bound must be finite and >= 0");
    double sum = 0.0;
    for (double a : alphas_) {
        if (!(std::isfinite(a) && a >= 0.0))
            throw InvalidParams("inar params: reproduction coefficients must be finite and >= 0");
        sum += a;
    }
    alpha_sum_ = sum;
    if (!(reproduction_mean() < 1.0))
        throw MassNotSubcritical("inar params: reproduction mean K must be < 1");
}

std::int64_t FiniteSupportSeq::support() const {
    for (std::int64_t i = static_cast<std::int64_t>(values.size()) - 1; i >= 0; --i)
        if (values[static_cast<std::size_t>(i)] != 0.0) return i;
    return -1;
}

}  // namespace ppsim
