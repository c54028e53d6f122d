#include "scramble/dynamics.hpp"

#include <cmath>
#include <mutex>
#include <unsupported/Eigen/MatrixFunctions>

namespace scramble {

void LindbladSpec::validate() const {
    if (hamiltonian.rows() != hamiltonian.cols())
        throw std::invalid_argument("Hamiltonian must be square");
    if (gamma < 0) throw std::invalid_argument("gamma must be non-negative");
    for (const Operator& l : jump_ops)
        if (l.rows() != hamiltonian.rows() || l.cols() != hamiltonian.cols())
            throw std::invalid_argument("jump operator dimension mismatch");
}

DensityMatrix evolve_unitary(const DensityMatrix& rho, const Operator& h, double t) {
    if (h.rows() != rho.dim()) throw std::invalid_argument("dimension mismatch");
    const Operator u = unitary_exp(h, t);
    return DensityMatrix::unchecked(u * rho.mat * u.adjoint());
}

std::vector<Operator> dephasing_jumps(DecoherenceBasis basis, const Operator& h, int n_qubits) {
    if (basis == DecoherenceBasis::computational) {
        std::vector<Operator> jumps;
        for (int k = 0; k < n_qubits; ++k)
            jumps.push_back(embed_single_qubit(pauli_Z(), k, n_qubits));
        return jumps;
    }
    const Spectrum s = eig_hermitian(h);
    std::vector<Operator> jumps;
    Eigen::Index k = 0;
    while (k < s.eigenvalues.size()) {
        Eigen::Index j = k + 1;
        while (j < s.eigenvalues.size() && s.eigenvalues(j) - s.eigenvalues(j - 1) < 1e-9) ++j;
        Operator p = Operator::Zero(h.rows(), h.cols());
        for (Eigen::Index m = k; m < j; ++m)
            p += s.eigenvectors.col(m) * s.eigenvectors.col(m).adjoint();
        jumps.push_back(std::move(p));
        k = j;
    }
    return jumps;
}

Eigen::VectorXcd vec_op(const Operator& m) {
    const Eigen::Index d = m.rows();
    Eigen::VectorXcd v(d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = m(i, j);
    return v;
}

Operator unvec_op(const Eigen::VectorXcd& v, Eigen::Index dim) {
    Operator m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = v(i * dim + j);
    return m;
}

Operator liouvillian(const LindbladSpec& spec) {
    spec.validate();
    const Eigen::Index d = spec.dim();
    const Operator id = identity_op(d);
    const cplx mi(0.0, -1.0);

    Operator l = mi * (tensor_product(spec.hamiltonian, id) -
                       tensor_product(id, spec.hamiltonian.transpose()));
    for (const Operator& lk : spec.jump_ops) {
        const Operator ldl = lk.adjoint() * lk;
        l += spec.gamma * (tensor_product(lk, lk.conjugate()) -
                           0.5 * (tensor_product(ldl, id) + tensor_product(id, ldl.transpose())));
    }
    return l;
}

namespace {

Operator lindblad_rhs(const Operator& rho, const LindbladSpec& spec) {
    const cplx mi(0.0, -1.0);
    Operator out = mi * (spec.hamiltonian * rho - rho * spec.hamiltonian);
    for (const Operator& lk : spec.jump_ops) {
        const Operator ldl = lk.adjoint() * lk;
        out += spec.gamma * (lk * rho * lk.adjoint() - 0.5 * (ldl * rho + rho * ldl));
    }
    return out;
}

Operator adjoint_rhs(const Operator& w, const LindbladSpec& spec) {
    const cplx pi(0.0, 1.0);
    Operator out = pi * (spec.hamiltonian * w - w * spec.hamiltonian);
    for (const Operator& lk : spec.jump_ops) {
        const Operator ldl = lk.adjoint() * lk;
        out += spec.gamma * (lk.adjoint() * w * lk - 0.5 * (ldl * w + w * ldl));
    }
    return out;
}

template <typename Rhs>
Operator rk4_propagate(Operator m, double t, double h, const Rhs& rhs) {
    const int steps = std::max(1, static_cast<int>(std::ceil(t / h - 1e-12)));
    const double dt = t / steps;
    for (int s = 0; s < steps; ++s) {
        const Operator k1 = rhs(m);
        const Operator k2 = rhs(m + 0.5 * dt * k1);
        const Operator k3 = rhs(m + 0.5 * dt * k2);
        const Operator k4 = rhs(m + dt * k3);
        m += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return m;
}

}  // namespace

DensityMatrix evolve_lindblad(const DensityMatrix& rho, const LindbladSpec& spec, double t) {
    spec.validate();
    if (t < 0) throw std::invalid_argument("negative evolution time");
    if (rho.dim() != spec.dim()) throw std::invalid_argument("dimension mismatch");
    if (t == 0) return rho;

    Operator evolved;
    if (spec.dim() <= 64) {
        const Operator prop = (liouvillian(spec) * t).exp();
        evolved = unvec_op(prop * vec_op(rho.mat), spec.dim());
    } else {
        evolved = rk4_propagate(rho.mat, t, 1e-3,
                                [&spec](const Operator& m) { return lindblad_rhs(m, spec); });
    }
    return DensityMatrix::unchecked(0.5 * (evolved + evolved.adjoint()));
}

Operator heisenberg_adjoint(const Operator& w, const LindbladSpec& spec, double t) {
    spec.validate();
    if (t < 0) throw std::invalid_argument("negative evolution time");
    if (w.rows() != spec.dim()) throw std::invalid_argument("dimension mismatch");
    if (t == 0) return w;

    if (spec.dim() <= 64) {
        const Operator prop = (liouvillian(spec).adjoint() * t).exp();
        return unvec_op(prop * vec_op(w), spec.dim());
    }
    return rk4_propagate(w, t, 1e-3,
                         [&spec](const Operator& m) { return adjoint_rhs(m, spec); });
}

DephasingPropagator::DephasingPropagator(const Operator& h, DecoherenceBasis basis, double gamma,
                                         int n_qubits, double strang_substep)
    : basis_(gamma == 0.0 ? DecoherenceBasis::energy : basis),
      gamma_(gamma),
      substep_(strang_substep),
      dim_(h.rows()),
      h_(h) {
    if (basis_ == DecoherenceBasis::energy) {
        Spectrum s = eig_hermitian(h);
        eigvecs_ = std::move(s.eigenvectors);
        eigvals_ = std::move(s.eigenvalues);
        block_.assign(dim_, 0);
        int g = 0;
        for (Eigen::Index k = 1; k < dim_; ++k) {
            if (eigvals_(k) - eigvals_(k - 1) >= 1e-9) ++g;
            block_[k] = g;
        }
    } else {
        // z_k(i) = +-1 sign of qubit k in basis state i (qubit 0 leftmost)
        decay_exponent_.resize(dim_, dim_);
        for (Eigen::Index i = 0; i < dim_; ++i) {
            for (Eigen::Index j = 0; j < dim_; ++j) {
                int agree = 0;
                for (int k = 0; k < n_qubits; ++k) {
                    const int bit = n_qubits - 1 - k;
                    const int zi = ((i >> bit) & 1) ? -1 : 1;
                    const int zj = ((j >> bit) & 1) ? -1 : 1;
                    agree += zi * zj;
                }
                decay_exponent_(i, j) = static_cast<double>(agree - n_qubits);
            }
        }
    }
}

void DephasingPropagator::prepare_step(double dt) const {
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    if (cached_dt_ == dt) return;
    if (basis_ == DecoherenceBasis::energy) {
        phase_full_.resize(dim_, dim_);
        for (Eigen::Index m = 0; m < dim_; ++m) {
            for (Eigen::Index n = 0; n < dim_; ++n) {
                const double omega = eigvals_(m) - eigvals_(n);
                const double decay = (block_[m] == block_[n]) ? 0.0 : gamma_ * dt;
                phase_full_(m, n) = std::exp(cplx(-decay, -omega * dt));
            }
        }
        cached_nsub_ = 1;
    } else {
        cached_nsub_ = std::max(1, static_cast<int>(std::ceil(dt / substep_ - 1e-12)));
        const double h = dt / cached_nsub_;
        u_sub_ = unitary_exp(h_, h);
        e_half_ = (0.5 * gamma_ * h * decay_exponent_).array().exp();
    }
    cached_dt_ = dt;
}

void DephasingPropagator::step_state(Operator& rho, double dt) const {
    prepare_step(dt);
    if (basis_ == DecoherenceBasis::energy) {
        rho = eigvecs_ *
              (phase_full_.array() * (eigvecs_.adjoint() * rho * eigvecs_).array()).matrix() *
              eigvecs_.adjoint();
        return;
    }
    for (int s = 0; s < cached_nsub_; ++s) {
        rho = e_half_.cast<cplx>().cwiseProduct(rho);
        rho = u_sub_ * rho * u_sub_.adjoint();
        rho = e_half_.cast<cplx>().cwiseProduct(rho);
    }
}

void DephasingPropagator::step_adjoint(Operator& w, double dt) const {
    prepare_step(dt);
    if (basis_ == DecoherenceBasis::energy) {
        w = eigvecs_ *
            (phase_full_.conjugate().array() * (eigvecs_.adjoint() * w * eigvecs_).array())
                .matrix() *
            eigvecs_.adjoint();
        return;
    }
    for (int s = 0; s < cached_nsub_; ++s) {
        w = e_half_.cast<cplx>().cwiseProduct(w);
        w = u_sub_.adjoint() * w * u_sub_;
        w = e_half_.cast<cplx>().cwiseProduct(w);
    }
}

const Operator& DephasingPropagator::energy_eigvecs() const {
    if (basis_ != DecoherenceBasis::energy)
        throw std::logic_error("eigenbasis data only available in energy mode");
    return eigvecs_;
}

Eigen::MatrixXcd DephasingPropagator::adjoint_factor(double t) const {
    if (basis_ != DecoherenceBasis::energy)
        throw std::logic_error("eigenbasis data only available in energy mode");
    if (t < 0) throw std::invalid_argument("negative evolution time");
    Eigen::MatrixXcd f(dim_, dim_);
    for (Eigen::Index m = 0; m < dim_; ++m) {
        for (Eigen::Index n = 0; n < dim_; ++n) {
            const double omega = eigvals_(m) - eigvals_(n);
            const double decay = (block_[m] == block_[n]) ? 0.0 : gamma_ * t;
            f(m, n) = std::exp(cplx(-decay, omega * t));
        }
    }
    return f;
}

DensityMatrix DephasingPropagator::evolve_state(const DensityMatrix& rho0, double t) const {
    Operator rho = rho0.mat;
    if (t > 0) step_state(rho, t);
    return DensityMatrix::unchecked(0.5 * (rho + rho.adjoint()));
}

JointModel build_joint_dephasing_model(int n_sys, const Operator& h_sys, double gamma) {
    if (n_sys < 2) throw std::invalid_argument("joint model needs n_sys >= 2");
    if (h_sys.rows() != (Eigen::Index{1} << n_sys))
        throw std::invalid_argument("system Hamiltonian dimension mismatch");
    const int n_total = 2 * n_sys;
    const Eigen::Index env_dim = Eigen::Index{1} << n_sys;

    Operator h_joint = tensor_product(h_sys, identity_op(env_dim));
    for (int k = 0; k < n_sys; ++k) {
        h_joint += gamma * embed_single_qubit(pauli_Z(), k, n_total) *
                   embed_single_qubit(pauli_Z(), n_sys + k, n_total);
    }

    JointModel model;
    model.n_sys = n_sys;
    model.n_env = n_sys;
    model.joint_hamiltonian = std::move(h_joint);
    model.env_equilibrium =
        DensityMatrix::unchecked(identity_op(env_dim) / static_cast<double>(env_dim));
    return model;
}

DensityMatrix evolve_joint(const JointModel& model, const DensityMatrix& rho_sys, double t) {
    if (rho_sys.dim() != (Eigen::Index{1} << model.n_sys))
        throw std::invalid_argument("system state dimension mismatch");
    const Operator joint0 = tensor_product(rho_sys.mat, model.env_equilibrium.mat);
    if (t == 0) return DensityMatrix::unchecked(joint0);
    const Operator u = unitary_exp(model.joint_hamiltonian, t);
    return DensityMatrix::unchecked(u * joint0 * u.adjoint());
}

}  // namespace scramble
