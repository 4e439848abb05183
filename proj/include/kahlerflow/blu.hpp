#pragma once

#include "kahlerflow/evolve.hpp"

namespace kahlerflow {

// Point of the complexification: every real coordinate continued to a complex
// value, in the system's coordinate order. The real locus is Im = 0, fixed by
// the antiholomorphic involution sigma (coordinatewise conjugation).
using DoubledPoint = Eigen::VectorXcd;

DoubledPoint embed(const HamSystem& sys, const Point& p);
DoubledPoint sigma(const DoubledPoint& xi);
bool on_real_locus(const DoubledPoint& xi, double tol = 1e-12);

// Analytic continuation of an expression built from entire functions of real
// coordinates: normalization pushes conjugations onto constants, after which
// continuation is evaluation at complex coordinate values.
Expr analytic_continuation(const Expr& e);
Complex doubled_eval(const HamSystem& sys, const Expr& continued, const DoubledPoint& xi);

// Right-hand side of the flow eta_t: the continued Hamiltonian field scaled by
// -tau (the conjugate half of the real field acts on the conjugate
// coordinates implicitly, since the state is holomorphic).
class ComplexFlowField {
public:
    ComplexFlowField(const HamSystem& sys, Complex tau);

    const HamSystem& system() const { return *sys_; }
    Complex tau() const { return tau_; }

    DoubledPoint rhs(const DoubledPoint& xi) const;
    // continued Hamiltonian, conserved along the flow
    Complex energy(const DoubledPoint& xi) const;
    // |Im rhs| at a real point; zero for real tau
    double tangency_defect(const DoubledPoint& xi) const;

private:
    const HamSystem* sys_;
    Complex tau_;
    std::vector<Expr> components_;
    Expr h_continued_;
};

struct FlowOptions {
    double tol = 1e-10;
    double initial_step = 0.0;  // 0: chosen from the first right-hand side
    long max_steps = 200000;
};

// adaptive embedded Runge-Kutta 4(5), deterministic for fixed options
DoubledPoint flow_eta(const ComplexFlowField& field, const DoubledPoint& start, double t,
                      const FlowOptions& opts = {});

// holomorphic projection (z_C, w_C) -> z_C, landed back on M through the chart
Point project_pi0(const HamSystem& sys, const DoubledPoint& xi);

// pi_t o eta_t o iota: integrate to eta_t(p), read the leaf constant through
// the doubled Lie series, and Newton-solve the leaf equations on M.
// Throws LeafProjectionError when the leaf misses M (real/mixed regime).
Point blu_forward(const EvolvedStructure& es, Complex tau, double t, const Point& p,
                  const FlowOptions& opts = {});

// pi_0 o eta_{-t} o iota; defined even where the flow map degenerates
Point varphi_via_pi0(const EvolvedStructure& es, Complex tau, double t, const Point& p,
                     const FlowOptions& opts = {});

// max over the grid of |phi_{t tau}(blu_forward(p)) - p|
double diagram_check(const EvolvedStructure& es, Complex tau, double t, const GridSpec& grid,
                     const FlowOptions& opts = {});

}  // namespace kahlerflow
