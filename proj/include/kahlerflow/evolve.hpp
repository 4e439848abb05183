#pragma once

#include <optional>

#include "kahlerflow/system.hpp"

namespace kahlerflow {

enum class PolarizationTag { Kahler, PseudoKahler, Real, Mixed, Degenerate };
std::string to_string(PolarizationTag tag);

// relative singular-value / eigenvalue cutoff used by all rank decisions
inline constexpr double kRankThreshold = 1e-8;

struct PolarizationClass {
    PolarizationTag tag;
    int rank_chart = 0;     // rank of the evolved dz rows
    int rank_combined = 0;  // rank of the combined (dz, dzbar) frame
    int n_pos = 0, n_neg = 0, n_zero = 0;  // metric signature when the frame is invertible
};

struct HermitianMetric {
    bool valid = false;      // false when the evolved frame is degenerate at p
    Eigen::MatrixXcd g;      // coefficients of omega = i g_jk dz^j ^ dzbar^k
    double hermitian_defect = 0.0;
    PolarizationClass cls;
};

// Evolved chart z_tau^i = e^{tau X_h} z^i as truncated series, with the
// conjugate chart and cached coefficient derivatives.
class EvolvedStructure {
public:
    EvolvedStructure(const HamSystem& sys, int order);

    const HamSystem& system() const { return *sys_; }
    int order() const { return order_; }
    const TauSeries& chart_series(int i) const { return chart_[i]; }
    const TauSeries& conj_chart_series(int i) const { return conj_chart_[i]; }

    Eigen::VectorXcd chart_value(Complex tau, const Point& p) const;
    Eigen::VectorXcd conj_chart_value(Complex tau, const Point& p) const;
    // A_{jm} = d z_tau^j / d xi^m
    Eigen::MatrixXcd chart_jacobian(Complex tau, const Point& p) const;
    Eigen::MatrixXcd conj_chart_jacobian(Complex tau, const Point& p) const;
    // [A; Abar]
    Eigen::MatrixXcd frame(Complex tau, const Point& p) const;

private:
    const HamSystem* sys_;
    int order_;
    std::vector<TauSeries> chart_, conj_chart_;
    std::vector<std::vector<TauSeries>> dchart_, dconj_chart_;
};

EvolvedStructure evolve_chart(const HamSystem& sys, int order);

HermitianMetric metric_at(const EvolvedStructure& es, Complex tau, const Point& p);

// gamma_tau = omega(., J_tau .) as a real symmetric matrix
Eigen::MatrixXd riemannian_metric_at(const EvolvedStructure& es, Complex tau, const Point& p);

PolarizationClass classify(const EvolvedStructure& es, Complex tau, const Point& p);

// Null space of the combined (dz_tau, dzbar_tau) frame at p: the directions a
// degenerating polarization collapses along. Columns are an orthonormal basis
// of the kernel (empty in the Kahler/pseudo-Kahler regime); no preferred
// frame beyond that is chosen.
Eigen::MatrixXcd frame_kernel(const EvolvedStructure& es, Complex tau, const Point& p);

// dz_tau^1 ^ ... ^ dz_tau^n expanded over the real coordinate differentials
struct CanonicalForm {
    std::vector<std::vector<int>> index_sets;  // increasing n-subsets of coordinate indices
    Eigen::VectorXcd coeffs;                   // minors of the evolved Jacobian
    Complex holomorphic_det;                   // leading coefficient in the initial dz basis
};
CanonicalForm evolve_canonical_form(const EvolvedStructure& es, Complex tau, const Point& p);

// point maps: z(phi_tau(p)) = z_tau(p)
Point flow_forward(const EvolvedStructure& es, Complex tau, const Point& p);
// Newton inverse of phi_tau; seed defaults to q
Point flow_inverse(const EvolvedStructure& es, Complex tau, const Point& q,
                   const Point* seed = nullptr);
// solve z_tau(xi) = target for a real point xi
Point invert_evolved_chart(const EvolvedStructure& es, Complex tau,
                           const Eigen::VectorXcd& target, const Point& seed);
Point invert_initial_chart(const HamSystem& sys, const Eigen::VectorXcd& target, const Point& seed);

// real-time flow map via the coordinate Lie series
Point real_flow_point(const HamSystem& sys, int order, double s, const Point& p);

}  // namespace kahlerflow
