#include "dimred/errors.hpp"
#include "dimred/umap.hpp"

#include <unsupported/Eigen/LevenbergMarquardt>

#include <cmath>
#include <sstream>

namespace dimred::umap {

namespace {

constexpr int kGridPoints = 300;

struct CurveResiduals : Eigen::DenseFunctor<double> {
    Eigen::VectorXd s, target;

    CurveResiduals(Eigen::VectorXd grid, Eigen::VectorXd g)
        : Eigen::DenseFunctor<double>(2, static_cast<int>(grid.size())), s(std::move(grid)), target(std::move(g)) {}

    int operator()(const InputType& x, ValueType& fvec) const {
        for (Index i = 0; i < s.size(); ++i) fvec[i] = 1.0 / (1.0 + x[0] * std::pow(s[i], 2.0 * x[1])) - target[i];
        return 0;
    }

    int df(const InputType& x, JacobianType& fjac) const {
        for (Index i = 0; i < s.size(); ++i) {
            if (s[i] <= 0.0) {
                fjac(i, 0) = 0.0;
                fjac(i, 1) = 0.0;
                continue;
            }
            const double u = std::pow(s[i], 2.0 * x[1]);
            const double denom = (1.0 + x[0] * u) * (1.0 + x[0] * u);
            fjac(i, 0) = -u / denom;
            fjac(i, 1) = -x[0] * u * 2.0 * std::log(s[i]) / denom;
        }
        return 0;
    }
};

}  // namespace

double target_curve(double s, double min_dist) { return s <= min_dist ? 1.0 : std::exp(-(s - min_dist)); }

CurveParams fit_ab(double min_dist, double spread) {
    if (!(min_dist >= 0.0)) throw ParameterError("min_dist must be >= 0");
    if (!(spread > 0.0)) throw ParameterError("spread must be > 0");

    Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(kGridPoints, 0.0, 3.0 * spread);
    Eigen::VectorXd g(kGridPoints);
    for (int i = 0; i < kGridPoints; ++i) g[i] = target_curve(grid[i], min_dist);

    CurveResiduals functor(grid, g);
    Eigen::LevenbergMarquardt<CurveResiduals> lm(functor);
    lm.setXtol(1e-12);
    lm.setFtol(1e-12);
    lm.setMaxfev(2000);
    Eigen::VectorXd x(2);
    x << 1.0, 1.0;
    const auto status = lm.minimize(x);

    CurveParams c{x[0], x[1], min_dist, spread, 0.0};
    if (!(std::isfinite(c.a) && std::isfinite(c.b) && c.a > 0.0 && c.b > 0.0) ||
        status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters) {
        std::ostringstream msg;
        msg << "curve fit did not converge: status " << static_cast<int>(status) << ", a = " << c.a << ", b = " << c.b
            << ", min_dist = " << min_dist << ", spread = " << spread;
        throw NumericalError(msg.str());
    }
    for (int i = 0; i < kGridPoints; ++i)
        c.max_deviation = std::max(c.max_deviation, std::abs(membership_sq(grid[i] * grid[i], c) - g[i]));
    return c;
}

}  // namespace dimred::umap
