#include "kahlerflow/tstark.hpp"

#include <cmath>

namespace kahlerflow {

AlgebraHamiltonian quadratic_algebra_hamiltonian() {
    AlgebraHamiltonian h;
    h.value = [](const Eigen::VectorXd& y) { return 0.5 * y.squaredNorm(); };
    h.grad = [](const Eigen::VectorXd& y) { return y; };
    return h;
}

Eigen::MatrixXcd TorusRep::group(const Eigen::VectorXd& theta) const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) m(j, j) = std::exp(Complex(0, theta(j)));
    return m;
}

Eigen::MatrixXcd TorusRep::algebra(const Eigen::VectorXd& u) const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) m(j, j) = u(j);
    return m;
}

Eigen::Matrix2cd Su2Rep::algebra(const Eigen::Vector3d& u) {
    Eigen::Matrix2cd m;
    const Complex i(0, 1);
    // (i/2)(u1 sigma1 + u2 sigma2 + u3 sigma3)
    m << 0.5 * i * u(2), 0.5 * i * u(0) + 0.5 * u(1), 0.5 * i * u(0) - 0.5 * u(1),
        -0.5 * i * u(2);
    return m;
}

Eigen::Vector3d Su2Rep::coords(const Eigen::Matrix2cd& a) {
    // inverse of `algebra` through <A, E_j> = -2 tr(A E_j)
    Eigen::Vector3d u;
    for (int j = 0; j < 3; ++j) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e(j) = 1.0;
        u(j) = -2.0 * (a * algebra(e)).trace().real();
    }
    return u;
}

Eigen::Matrix2cd Su2Rep::adjoint(const Eigen::Matrix2cd& k, const Eigen::Matrix2cd& y) {
    return k * y * k.adjoint();
}

double unitarity_defect(const Eigen::MatrixXcd& x) {
    Eigen::MatrixXcd d = x.adjoint() * x - Eigen::MatrixXcd::Identity(x.rows(), x.cols());
    return d.cwiseAbs().maxCoeff();
}

void TStarKPoint::validate(double tol) const {
    if (unitarity_defect(x) > tol) throw Error("T*K point: group element is not unitary");
}

Complex tstark_closed_form(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& u_rep, Complex tau,
                           const Eigen::MatrixXcd& endo) {
    Eigen::MatrixXcd arg = (Complex(0, 1) + tau) * u_rep;
    return (endo * x * expm(arg)).trace();
}

Complex tstark_lie_series(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& u_rep, Complex tau,
                          const Eigen::MatrixXcd& endo, int order) {
    if (order < 0 || order > 16) throw Error("tstark_lie_series: order must be in [0, 16]");
    Eigen::MatrixXcd seed = expm(Complex(0, 1) * u_rep);
    Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(u_rep.rows(), u_rep.cols());
    Complex acc = 0.0;
    Complex tau_pow = 1.0;
    double factorial = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) {
            power = power * u_rep;
            tau_pow *= tau;
            factorial *= k;
        }
        acc += tau_pow / factorial * (endo * x * power * seed).trace();
    }
    return acc;
}

double tstark_kappa(const AlgebraHamiltonian& h, const Eigen::VectorXd& y, Complex tau) {
    Eigen::VectorXd u = h.grad(y);
    return 2.0 * (tau.imag() + 1.0) * (y.dot(u) - h.value(y));
}

double tstark_potential_check(const AlgebraHamiltonian& h, const Eigen::VectorXd& y, Complex tau) {
    Eigen::VectorXd u = h.grad(y);
    double uy = y.dot(u);
    double kappa0 = 2.0 * (uy - h.value(y));
    // psi_tau = -(i/2) kappa0 + tau h - alpha_tau with alpha_tau = tau u.Y
    Complex psi = Complex(0, -0.5) * kappa0 + tau * h.value(y) - tau * uy;
    double via_formula = -2.0 * psi.imag();
    return std::abs(tstark_kappa(h, y, tau) - via_formula);
}

PolarizationTag tstark_classification(const AlgebraHamiltonian& h, const Eigen::VectorXd& y,
                                      Complex tau) {
    // FD Hessian of the Legendre term Y.u - h; kappa's Hessian is 2(s+1) times it
    int n = static_cast<int>(y.size());
    double step = 1e-5;
    auto legendre = [&](const Eigen::VectorXd& p) { return p.dot(h.grad(p)) - h.value(p); };
    Eigen::MatrixXd hess(n, n);
    double f0 = legendre(y);
    for (int a = 0; a < n; ++a) {
        Eigen::VectorXd up = y, dn = y;
        up(a) += step;
        dn(a) -= step;
        hess(a, a) = (legendre(up) - 2 * f0 + legendre(dn)) / (step * step);
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            Eigen::VectorXd pp = y, pm = y, mp = y, mm = y;
            pp(a) += step; pp(b) += step;
            pm(a) += step; pm(b) -= step;
            mp(a) -= step; mp(b) += step;
            mm(a) -= step; mm(b) -= step;
            hess(a, b) = hess(b, a) =
                (legendre(pp) - legendre(pm) - legendre(mp) + legendre(mm)) / (4 * step * step);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(hess);
    double scale = ref.eigenvalues().cwiseAbs().maxCoeff();
    double factor = 2.0 * (tau.imag() + 1.0);
    int pos = 0, neg = 0, zero = 0;
    for (int k = 0; k < n; ++k) {
        double lambda = factor * ref.eigenvalues()(k);
        if (lambda > kRankThreshold * scale)
            ++pos;
        else if (lambda < -kRankThreshold * scale)
            ++neg;
        else
            ++zero;
    }
    if (pos == n) return PolarizationTag::Kahler;
    if (zero == n) return PolarizationTag::Real;
    if (neg == n) return PolarizationTag::PseudoKahler;
    return PolarizationTag::Mixed;
}

}  // namespace kahlerflow
