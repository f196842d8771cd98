#include "tsq/drift.hpp"

#include <cmath>
#include <stdexcept>

#include "tsq/errors.hpp"

namespace tsq {

DriftFunction DriftFunction::linear(double kappa_y, double theta_y) {
    if (!(kappa_y > 0.0) || !(theta_y > 0.0))
        throw InvalidInput("linear drift requires kappa_y > 0 and theta_y > 0");
    DriftFunction d;
    d.kind_ = Kind::Linear;
    d.poly_ = Polynomial<double>({kappa_y * theta_y, -kappa_y});
    d.alpha0_ = kappa_y * theta_y;
    return d;
}

DriftFunction DriftFunction::cubic(double c, double y1, double y2, double y3) {
    if (!(c < 0.0)) throw InvalidInput("cubic drift requires a negative leading coefficient");
    if (!(0.0 < y1 && y1 < y2 && y2 < y3))
        throw InvalidInput("cubic drift requires roots 0 < y1 < y2 < y3");
    DriftFunction d;
    d.kind_ = Kind::Cubic;
    const Polynomial<double> m1({-y1, 1.0}), m2({-y2, 1.0}), m3({-y3, 1.0});
    d.poly_ = Polynomial<double>::constant(c) * m1 * m2 * m3;
    d.alpha0_ = d.poly_.coeff(0);
    return d;
}

DriftFunction DriftFunction::polynomial(std::vector<double> ascending_coeffs) {
    DriftFunction d;
    d.kind_ = Kind::Polynomial;
    d.poly_ = Polynomial<double>(std::move(ascending_coeffs));
    d.alpha0_ = d.poly_.coeff(0);
    return d;
}

DriftFunction DriftFunction::general(std::function<double(double)> fn) {
    if (!fn) throw InvalidInput("general drift requires a callable");
    DriftFunction d;
    d.kind_ = Kind::General;
    d.fn_ = std::move(fn);
    d.alpha0_ = d.fn_(0.0);
    if (!std::isfinite(d.alpha0_)) throw InvalidInput("drift not evaluable at y = 0");
    return d;
}

double DriftFunction::operator()(double y) const {
    const double v = kind_ == Kind::General ? fn_(y) : poly_(y);
    if (!std::isfinite(v)) throw InvalidInput("drift not evaluable");
    return v;
}

double DriftFunction::alpha_hat(double y) const {
    if (y < 0.0) throw InvalidInput("alpha_hat requires y >= 0");
    if (kind_ != Kind::General) {
        // sum_{k>=1} a_k y^{k-1}: algebraically (alpha(y)-alpha(0))/y without
        // the cancellation
        const auto& c = poly_.coeffs();
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 1;) acc = acc * y + c[k];
        return acc;
    }
    if (y == 0.0) return derivative(0.0);
    return ((*this)(y)-alpha0_) / y;
}

double DriftFunction::derivative(double y) const {
    if (kind_ != Kind::General) return poly_.derivative()(y);
    const double h = 1e-6 * (1.0 + std::fabs(y));
    if (y == 0.0) return (fn_(h) - fn_(0.0)) / h;  // one-sided at the support edge
    return (fn_(y + h) - fn_(std::max(0.0, y - h))) / (y + h - std::max(0.0, y - h));
}

const Polynomial<double>& DriftFunction::coefficients() const {
    if (kind_ == Kind::General)
        throw NonPolynomialDrift("general drift has no polynomial coefficients");
    return poly_;
}

double DriftFunction::alpha_hat_antiderivative(double a, double b) const {
    if (kind_ == Kind::General)
        throw NonPolynomialDrift("closed-form alpha_hat integral needs a polynomial drift");
    // integral of sum_{k>=1} a_k y^{k-1} is sum a_k y^k / k
    const auto& c = poly_.coeffs();
    auto eval = [&](double y) {
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 1;) acc = acc * y + c[k] / static_cast<double>(k);
        return acc * y;
    };
    return eval(b) - eval(a);
}

}  // namespace tsq
