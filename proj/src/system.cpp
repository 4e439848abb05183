#include "kahlerflow/system.hpp"

namespace kahlerflow {

HamSystem::HamSystem(SymplecticForm omega_, Expr h_, std::vector<Expr> theta_,
                     std::vector<Expr> chart_, Expr kappa0_, GridSpec domain_)
    : omega(std::move(omega_)),
      h(std::move(h_)),
      theta(std::move(theta_)),
      chart(std::move(chart_)),
      kappa0(std::move(kappa0_)),
      domain(std::move(domain_)),
      field_(hamiltonian_field(h, omega)) {
    std::size_t d = omega.coords.size();
    if (theta.size() != d) throw Error("system: theta component count mismatch");
    if (chart.size() * 2 != d) throw Error("system: chart must have dim/2 entries");
    omega.validate();
    // omega = -d theta, exactly
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            Expr dtheta = differentiate(theta[k], omega.coords[j]) -
                          differentiate(theta[j], omega.coords[k]);
            if (!normalize(dtheta + omega.entries[j][k]).is_zero_constant())
                throw Error("system: theta is not a potential for -omega");
        }
    }
    dchart_.reserve(chart.size() * d);
    for (const auto& z : chart)
        for (const auto& c : omega.coords) dchart_.push_back(normalize(differentiate(z, c)));
    dkappa0_.reserve(d);
    for (const auto& c : omega.coords) dkappa0_.push_back(normalize(differentiate(kappa0, c)));
}

Expr HamSystem::theta_pairing(const Derivation& v) const {
    Expr s;
    for (std::size_t k = 0; k < theta.size(); ++k) s = s + theta[k] * v.components[k];
    return normalize(s);
}

Eigen::MatrixXd HamSystem::omega_matrix(const Point& p) const {
    std::size_t d = omega.coords.size();
    Eigen::MatrixXd w(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            Complex v = evaluate(omega.entries[j][k], p);
            if (std::abs(v.imag()) > 1e-12) throw Error("omega entry is not real at this point");
            w(j, k) = v.real();
        }
    }
    return w;
}

Eigen::MatrixXcd HamSystem::chart_jacobian(const Point& p) const {
    std::size_t d = omega.coords.size();
    Eigen::MatrixXcd a(chart.size(), d);
    for (std::size_t j = 0; j < chart.size(); ++j)
        for (std::size_t m = 0; m < d; ++m) a(j, m) = evaluate(dchart_[j * d + m], p);
    return a;
}

Eigen::MatrixXcd HamSystem::chart_frame(const Point& p) const {
    Eigen::MatrixXcd a = chart_jacobian(p);
    Eigen::MatrixXcd frame(2 * a.rows(), a.cols());
    frame.topRows(a.rows()) = a;
    frame.bottomRows(a.rows()) = a.conjugate();
    return frame;
}

Eigen::MatrixXcd two_form_in_frame(const Eigen::MatrixXd& w, const Eigen::MatrixXcd& frame) {
    Eigen::MatrixXcd inv = frame.fullPivLu().inverse();
    return inv.transpose() * w * inv;
}

void HamSystem::validate(double tol) const {
    int nn = n();
    int d = dim();
    for (const auto& p : domain.points()) {
        Eigen::MatrixXcd frame = chart_frame(p);
        auto lu = frame.fullPivLu();
        if (!lu.isInvertible()) throw Error("initial chart frame is singular on the domain");
        Eigen::MatrixXcd inv = lu.inverse();
        Eigen::MatrixXd w = omega_matrix(p);
        Eigen::MatrixXcd in_frame = inv.transpose() * w * inv;
        // type (1,1): the dz^j ^ dz^k block vanishes
        for (int j = 0; j < nn; ++j)
            for (int k = 0; k < nn; ++k)
                if (std::abs(in_frame(j, k)) > tol)
                    throw Error("omega is not type (1,1) in the initial chart");
        // positivity of g = -i * (dz ^ dzbar block)
        Eigen::MatrixXcd g(nn, nn);
        for (int j = 0; j < nn; ++j)
            for (int k = 0; k < nn; ++k) g(j, k) = Complex(0, -1) * in_frame(j, nn + k);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig((g + g.adjoint()) / 2.0);
        if (eig.eigenvalues().minCoeff() <= 0)
            throw Error("omega is not positive in the initial chart on the domain");
        // theta^(0,1) = -(i/2) dbar kappa0
        for (int k = 0; k < nn; ++k) {
            Complex theta01 = 0.0, dbar_kappa = 0.0;
            for (int m = 0; m < d; ++m) {
                theta01 += evaluate(theta[m], p) * inv(m, nn + k);
                dbar_kappa += evaluate(dkappa0_[m], p) * inv(m, nn + k);
            }
            if (std::abs(theta01 + Complex(0, 0.5) * dbar_kappa) > tol)
                throw Error("theta^(0,1) does not match -(i/2) dbar kappa0");
        }
    }
}

}  // namespace kahlerflow
