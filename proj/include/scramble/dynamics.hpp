#ifndef SCRAMBLE_DYNAMICS_HPP
#define SCRAMBLE_DYNAMICS_HPP

#include <vector>

#include "scramble/core.hpp"

namespace scramble {

enum class DecoherenceBasis { computational, energy };

struct LindbladSpec {
    Operator hamiltonian;
    std::vector<Operator> jump_ops;
    double gamma = 0.0;  // units of J/hbar

    void validate() const;
    Eigen::Index dim() const { return hamiltonian.rows(); }
};

// e^{-iht} rho e^{+iht}
DensityMatrix evolve_unitary(const DensityMatrix& rho, const Operator& h, double t);

// computational -> one sigma_z per qubit; energy -> eigenprojectors of h
// onto eigenvalue groups (grouping tolerance 1e-9).
std::vector<Operator> dephasing_jumps(DecoherenceBasis basis, const Operator& h, int n_qubits);

// Row-stacking vectorization: vec(M)[i*d + j] = M(i, j).
Eigen::VectorXcd vec_op(const Operator& m);
Operator unvec_op(const Eigen::VectorXcd& v, Eigen::Index dim);

// Matrix L on the dim^2 space with vec(d rho/dt) = L vec(rho):
//   L = -i(H (x) I - I (x) H^T)
//       + gamma sum_k [ L_k (x) conj(L_k)
//                       - 1/2 (L_k^dag L_k (x) I + I (x) (L_k^dag L_k)^T) ]
Operator liouvillian(const LindbladSpec& spec);

// exp(L t) applied to vec(rho); Hermiticity restored by symmetrization.
// Dense superoperator exponential for dim <= 64, fixed-step RK4 with
// h = 1e-3 beyond that.
DensityMatrix evolve_lindblad(const DensityMatrix& rho, const LindbladSpec& spec, double t);

// Adjoint (Heisenberg-picture) channel: exp(L^dag t) applied to vec(W).
Operator heisenberg_adjoint(const Operator& w, const LindbladSpec& spec, double t);

// Fast trajectory propagator for the two dephasing families.
//
// Energy basis (and gamma = 0): the generator is elementwise in the
// Hamiltonian eigenbasis, so every step is exact for any step size.
// Computational basis with gamma > 0: Strang splitting of the unitary
// flow and the elementwise decay factor; both factors are CPTP, so
// trace and positivity are preserved exactly and the only error is the
// O(h^2) splitting defect (substep 'strang_substep', default 5e-3).
class DephasingPropagator {
  public:
    DephasingPropagator(const Operator& h, DecoherenceBasis basis, double gamma, int n_qubits,
                        double strang_substep = 5e-3);

    // One Schroedinger-picture step of length dt, in place.
    void step_state(Operator& rho, double dt) const;
    // One adjoint-channel (Heisenberg) step of length dt, in place.
    void step_adjoint(Operator& w, double dt) const;

    DensityMatrix evolve_state(const DensityMatrix& rho0, double t) const;

    // Energy-mode channel is diagonal in the eigenbasis, which lets callers
    // jump to any time in one elementwise product instead of stepping.
    bool energy_mode() const { return basis_ == DecoherenceBasis::energy; }
    const Operator& energy_eigvecs() const;
    // Elementwise eigenbasis factor of the adjoint channel over [0, t].
    Eigen::MatrixXcd adjoint_factor(double t) const;

  private:
    void prepare_step(double dt) const;

    DecoherenceBasis basis_;
    double gamma_;
    double substep_;
    Eigen::Index dim_;
    // energy path
    Operator eigvecs_;
    Eigen::VectorXd eigvals_;
    std::vector<int> block_;  // eigenvalue-group id per eigenstate
    // computational path: d_ij = sum_k z_k(i) z_k(j) - n
    Eigen::MatrixXd decay_exponent_;
    Operator h_;
    // cached substep operators (keyed by requested dt)
    mutable double cached_dt_ = -1.0;
    mutable int cached_nsub_ = 0;
    mutable Operator u_sub_;              // e^{-iH h}
    mutable Eigen::MatrixXd e_half_;      // exp(gamma d h / 2)
    mutable Eigen::MatrixXcd phase_full_; // energy-basis elementwise factor for dt
};

// Explicit system+environment pure-dephasing model: one mirror qubit per
// system qubit, ZZ coupling, infinite-temperature environment.
struct JointModel {
    int n_sys = 0;
    int n_env = 0;
    Operator joint_hamiltonian;     // on n_sys + n_env qubits
    DensityMatrix env_equilibrium;  // on the environment qubits
};

JointModel build_joint_dephasing_model(int n_sys, const Operator& h_sys, double gamma);

// Unitary evolution of rho_sys (x) env_equilibrium under the joint
// Hamiltonian; returns the joint state.
DensityMatrix evolve_joint(const JointModel& model, const DensityMatrix& rho_sys, double t);

}  // namespace scramble

#endif
