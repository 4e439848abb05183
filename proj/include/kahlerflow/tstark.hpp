#pragma once

#include <functional>

#include "kahlerflow/evolve.hpp"

namespace kahlerflow {

// scaling-and-squaring Pade(13) matrix exponential
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

// Ad-invariant Hamiltonian on the Lie algebra in orthonormal coordinates,
// with its Legendre data u(Y) = grad h.
struct AlgebraHamiltonian {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;
};
AlgebraHamiltonian quadratic_algebra_hamiltonian();  // h = |Y|^2/2

// defining representation of U(1)^n
struct TorusRep {
    int n = 1;
    Eigen::MatrixXcd group(const Eigen::VectorXd& theta) const;   // diag(e^{i theta_j})
    Eigen::MatrixXcd algebra(const Eigen::VectorXd& u) const;     // diag(u_j)
};

// defining representation of SU(2); orthonormal basis E_j = (i/2) sigma_j
// with respect to <A,B> = -2 tr(AB)
struct Su2Rep {
    static Eigen::Matrix2cd algebra(const Eigen::Vector3d& u);
    static Eigen::Vector3d coords(const Eigen::Matrix2cd& a);
    static Eigen::Matrix2cd adjoint(const Eigen::Matrix2cd& k, const Eigen::Matrix2cd& y);
};

double unitarity_defect(const Eigen::MatrixXcd& x);

struct TStarKPoint {
    Eigen::MatrixXcd x;   // group element in the representation, unitary
    Eigen::VectorXd y;    // algebra coordinates

    void validate(double tol = 1e-12) const;
};

// tr(E pi(x e^{(i+tau) u(Y)})), with u_rep = pi(u(Y))
Complex tstark_closed_form(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& u_rep, Complex tau,
                           const Eigen::MatrixXcd& endo);

// partial sum  sum_{k<=order} tau^k/k! tr(E pi(x) pi(u)^k pi(e^{iu}))
Complex tstark_lie_series(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& u_rep, Complex tau,
                          const Eigen::MatrixXcd& endo, int order);

// kappa_tau = 2(Im tau + 1)(Y.u(Y) - h(Y))
double tstark_kappa(const AlgebraHamiltonian& h, const Eigen::VectorXd& y, Complex tau);

// residual between the Legendre closed form of kappa_tau and the potential
// evolution formula evaluated with alpha_tau = tau u(Y).Y and X_h kappa0 = 0
double tstark_potential_check(const AlgebraHamiltonian& h, const Eigen::VectorXd& y, Complex tau);

// Kahler for Im tau > -1, real on the boundary, pseudo-Kahler past it;
// decided from the eigenvalues of the kappa_tau Hessian in Y coordinates
PolarizationTag tstark_classification(const AlgebraHamiltonian& h, const Eigen::VectorXd& y,
                                      Complex tau);

}  // namespace kahlerflow
