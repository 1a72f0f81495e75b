#include "ppsim/estimate.hpp"

#include <cmath>

#include "ppsim/errors.hpp"

namespace ppsim::estimate {

namespace {

// Solve the symmetric positive definite system A x = b in place by Cholesky.
// A is row-major (dim x dim), lower triangle used.
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b, std::size_t dim) {
    double max_diag = 0.0;
    for (std::size_t i = 0; i < dim; ++i) max_diag = std::max(max_diag, a[i * dim + i]);
    for (std::size_t j = 0; j < dim; ++j) {
        double d = a[j * dim + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * dim + k] * a[j * dim + k];
        if (!(d > 1e-12 * std::max(max_diag, 1.0)))
            throw SingularDesign("fit_inar_ls: design matrix is singular");
        const double root = std::sqrt(d);
        a[j * dim + j] = root;
        for (std::size_t i = j + 1; i < dim; ++i) {
            double s = a[i * dim + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * dim + k] * a[j * dim + k];
            a[i * dim + j] = s / root;
        }
    }
    // Forward then backward substitution.
    for (std::size_t i = 0; i < dim; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a[i * dim + k] * b[k];
        b[i] = s / a[i * dim + i];
    }
    for (std::size_t i = dim; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < dim; ++k) s -= a[k * dim + i] * b[k];
        b[i] = s / a[i * dim + i];
    }
    return b;
}

}  // namespace

LsFit fit_inar_ls(const CountSeries& series, std::size_t p) {
    const auto& counts = series.counts;
    if (counts.size() < p + 11)
        throw SeriesTooShort("fit_inar_ls: series length must exceed p + 10");
    const std::size_t dim = p + 1;
    const std::size_t n_rows = counts.size() - p;

    // Normal equations: regressor vector x = (1, X_{n-1}, ..., X_{n-p}).
    std::vector<double> xtx(dim * dim, 0.0), xty(dim, 0.0), x(dim, 1.0);
    for (std::size_t i = p; i < counts.size(); ++i) {
        for (std::size_t k = 1; k <= p; ++k) x[k] = static_cast<double>(counts[i - k]);
        const double y = static_cast<double>(counts[i]);
        for (std::size_t r = 0; r < dim; ++r) {
            xty[r] += x[r] * y;
            for (std::size_t c = 0; c <= r; ++c) xtx[r * dim + c] += x[r] * x[c];
        }
    }
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = r + 1; c < dim; ++c) xtx[r * dim + c] = xtx[c * dim + r];

    const auto coef = solve_spd(xtx, xty, dim);

    double ssr = 0.0;
    for (std::size_t i = p; i < counts.size(); ++i) {
        double fit = coef[0];
        for (std::size_t k = 1; k <= p; ++k) fit += coef[k] * static_cast<double>(counts[i - k]);
        const double resid = static_cast<double>(counts[i]) - fit;
        ssr += resid * resid;
    }

    LsFit out;
    out.alpha0_hat = coef[0];
    out.alphas_hat.assign(coef.begin() + 1, coef.end());
    out.residual_variance = ssr / static_cast<double>(n_rows - dim);
    return out;
}

KernelEstimate kernel_from_bins(const CountSeries& series, double delta, std::size_t p) {
    if (!(std::isfinite(delta) && delta > 0.0))
        throw InvalidParams("kernel_from_bins: delta must be > 0");
    const LsFit fit = fit_inar_ls(series, p);
    KernelEstimate out;
    out.delta = delta;
    out.eta_hat = fit.alpha0_hat / delta;
    out.h_hat.resize(p);
    for (std::size_t k = 0; k < p; ++k) out.h_hat[k] = fit.alphas_hat[k] / delta;
    out.residual_variance = fit.residual_variance;
    return out;
}

}  // namespace ppsim::estimate
