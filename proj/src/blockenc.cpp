#include "nmrq/blockenc.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

namespace nmrq {

namespace {

using complexd = std::complex<double>;

// Apply one signed Pauli string to a contiguous system block.
void apply_op_block(const PauliStringOp& op, const Eigen::VectorXcd& in,
                    Eigen::VectorXcd& out) {
  const auto dim = static_cast<std::uint64_t>(in.size());
  for (std::uint64_t b = 0; b < dim; ++b) {
    const double sign = (std::popcount(b & op.zmask) & 1) ? -1.0 : 1.0;
    out[static_cast<Eigen::Index>(b ^ op.xmask)] =
        op.phase * sign * in[static_cast<Eigen::Index>(b)];
  }
}

}  // namespace

Eigen::MatrixXcd BlockEncoding::prepare_dense() const {
  const Eigen::Index dim_a = Eigen::Index{1} << m;
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(dim_a, dim_a);
  Eigen::VectorXd v = -amplitudes;
  v[0] += 1.0;  // v = e0 - g
  const double norm2 = v.squaredNorm();
  // g = e0 needs no reflection; the Householder reflector I - 2vv^T/|v|^2
  // maps the unit vector g onto e0 (and e0 onto g, so column 0 equals g).
  if (norm2 > 1e-28) p -= (2.0 / norm2) * (v * v.transpose());
  return p.cast<complexd>();
}

Eigen::MatrixXcd BlockEncoding::select_dense() const {
  const std::uint64_t dim_s = std::uint64_t{1} << n;
  const std::uint64_t dim_a = std::uint64_t{1} << m;
  const Eigen::Index dim = static_cast<Eigen::Index>(dim_s * dim_a);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint64_t a = 0; a < dim_a; ++a) {
    const PauliStringOp& op = selected[a];
    for (std::uint64_t b = 0; b < dim_s; ++b) {
      const double sign = (std::popcount(b & op.zmask) & 1) ? -1.0 : 1.0;
      s(static_cast<Eigen::Index>(a * dim_s + (b ^ op.xmask)),
        static_cast<Eigen::Index>(a * dim_s + b)) = op.phase * sign;
    }
  }
  return s;
}

Eigen::VectorXcd BlockEncoding::apply_uh(const Eigen::VectorXcd& psi) const {
  const Eigen::Index dim_s = Eigen::Index{1} << n;
  const Eigen::Index dim_a = Eigen::Index{1} << m;
  if (psi.size() != dim_s * dim_a)
    throw std::invalid_argument("apply_uh: state dimension mismatch");
  const Eigen::MatrixXcd p = prepare_dense();

  Eigen::VectorXcd work = psi;
  // Ancilla-major layout: flattened index a * 2^n + s is column-major for a
  // (2^n x 2^a) matrix view, so Prepare acts as a right factor (P symmetric).
  Eigen::Map<Eigen::MatrixXcd> view(work.data(), dim_s, dim_a);
  view = view * p;

  Eigen::VectorXcd col(dim_s), tmp(dim_s);
  for (Eigen::Index a = 0; a < dim_a; ++a) {
    col = view.col(a);
    apply_op_block(selected[static_cast<std::size_t>(a)], col, tmp);
    view.col(a) = tmp;
  }

  view = view * p;  // P^dag = P (real symmetric)
  return work;
}

Eigen::VectorXcd BlockEncoding::apply_walk(const Eigen::VectorXcd& psi) const {
  const Eigen::Index dim_s = Eigen::Index{1} << n;
  const Eigen::Index dim_a = Eigen::Index{1} << m;
  Eigen::VectorXcd w = apply_uh(psi);
  // Reflection about the ancilla-zero subspace: keep block a = 0, negate rest.
  w.segment(dim_s, dim_s * (dim_a - 1)) *= -1.0;
  return w;
}

BlockEncoding make_block_encoding(const SpinHamiltonian& h) {
  if (h.term_count() == 0)
    throw std::invalid_argument("make_block_encoding: Hamiltonian has no terms");
  if (h.n_sites < 1)
    throw std::invalid_argument("make_block_encoding: need at least one site");

  BlockEncoding enc;
  enc.n = h.n_sites;
  enc.m = h.term_count() <= 1
              ? 0
              : static_cast<int>(std::bit_width(h.term_count() - 1));
  if (enc.n + enc.m > 26)
    throw std::domain_error("make_block_encoding: state space too large to verify");
  enc.alpha = h.alpha();

  const std::size_t slots = std::size_t{1} << enc.m;
  enc.amplitudes = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(slots));
  enc.selected.assign(slots, PauliStringOp{});  // identity padding

  for (std::size_t i = 0; i < h.terms.size(); ++i) {
    const PauliTerm& term = h.terms[i];
    const double mag = std::abs(term.coeff);
    if (mag == 0.0) continue;
    enc.amplitudes[static_cast<Eigen::Index>(i)] = std::sqrt(mag / enc.alpha);
    PauliStringOp op = make_string_op(term);
    op.phase /= mag;  // leave sgn(c) * i^{n_Y}: a unitary, Hermitian string
    enc.selected[i] = op;
  }
  return enc;
}

Eigen::MatrixXcd encoded_block(const BlockEncoding& enc) {
  const Eigen::Index dim_s = Eigen::Index{1} << enc.n;
  const Eigen::Index dim_a = Eigen::Index{1} << enc.m;
  Eigen::MatrixXcd block(dim_s, dim_s);
  Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(dim_s * dim_a);
  for (Eigen::Index s = 0; s < dim_s; ++s) {
    basis.setZero();
    basis[s] = 1.0;  // ancilla 0, system basis state s
    const Eigen::VectorXcd out = enc.apply_uh(basis);
    block.col(s) = out.head(dim_s);
  }
  return block;
}

double block_residual(const BlockEncoding& enc, const SpinHamiltonian& h) {
  const Eigen::Index dim_s = Eigen::Index{1} << enc.n;
  Eigen::MatrixXcd target = dense_matrix(h);
  target -= h.energy_offset * Eigen::MatrixXcd::Identity(dim_s, dim_s);
  target /= enc.alpha;
  return (encoded_block(enc) - target).cwiseAbs().maxCoeff();
}

double walk_phase_residual(const BlockEncoding& enc, const SpinHamiltonian& h) {
  const Eigen::Index dim_s = Eigen::Index{1} << enc.n;
  const Eigen::Index dim_a = Eigen::Index{1} << enc.m;
  const Eigen::Index dim = dim_s * dim_a;

  Eigen::MatrixXcd target = dense_matrix(h);
  target -= h.energy_offset * Eigen::MatrixXcd::Identity(dim_s, dim_s);
  target /= enc.alpha;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(target);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("walk_phase_residual: eigendecomposition failed");

  double worst = 0.0;
  Eigen::VectorXcd a_vec = Eigen::VectorXcd::Zero(dim);
  for (Eigen::Index j = 0; j < dim_s; ++j) {
    const double lam = solver.eigenvalues()[j];
    a_vec.setZero();
    a_vec.head(dim_s) = solver.eigenvectors().col(j);

    // Because U_H^2 = I, span{a, U_H a} is walk-invariant; inside it the walk
    // rotates by the qubitization angle arccos(lambda).
    const Eigen::VectorXcd b_vec = enc.apply_uh(a_vec);
    const complexd overlap = a_vec.dot(b_vec);  // <a|b> = lambda up to encoding error
    Eigen::VectorXcd b_perp = b_vec - overlap * a_vec;
    const double beta = b_perp.norm();

    if (beta <= 1e-8) {
      // lambda = +-1: the subspace is one-dimensional and W a = lambda a.
      const double sgn = overlap.real() >= 0.0 ? 1.0 : -1.0;
      const Eigen::VectorXcd wa = enc.apply_walk(a_vec);
      worst = std::max(worst, (wa - sgn * a_vec).cwiseAbs().maxCoeff());
      continue;
    }
    b_perp /= beta;

    const Eigen::VectorXcd wa = enc.apply_walk(a_vec);
    const Eigen::VectorXcd wb = enc.apply_walk(b_perp);
    const complexd w00 = a_vec.dot(wa), w01 = a_vec.dot(wb);
    const complexd w10 = b_perp.dot(wa), w11 = b_perp.dot(wb);

    const double leak =
        std::max((wa - w00 * a_vec - w10 * b_perp).cwiseAbs().maxCoeff(),
                 (wb - w01 * a_vec - w11 * b_perp).cwiseAbs().maxCoeff());

    const complexd tr = w00 + w11;
    const complexd det = w00 * w11 - w01 * w10;
    const complexd disc = std::sqrt(tr * tr - 4.0 * det);
    const complexd ev_a = 0.5 * (tr + disc);
    const complexd ev_b = 0.5 * (tr - disc);

    // Walk eigenvalues e^{+-i arccos(lambda)} are unimodular with real part
    // equal to lambda.
    double resid = leak;
    resid = std::max(resid, std::abs(std::abs(ev_a) - 1.0));
    resid = std::max(resid, std::abs(std::abs(ev_b) - 1.0));
    resid = std::max(resid, std::abs(ev_a.real() - lam));
    resid = std::max(resid, std::abs(ev_b.real() - lam));
    worst = std::max(worst, resid);
  }
  return worst;
}

BlockEncodingCheck verify_block_encoding(const SpinHamiltonian& h) {
  const BlockEncoding enc = make_block_encoding(h);
  BlockEncodingCheck check;
  check.block_residual = block_residual(enc, h);
  check.walk_residual = walk_phase_residual(enc, h);

  // Probe ||U_H^2 - I|| with random states; U_H is Hermitian here, so this
  // doubles as the unitarity defect.
  const Eigen::Index dim = Eigen::Index{1} << (enc.n + enc.m);
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int probe = 0; probe < 8; ++probe) {
    Eigen::VectorXcd psi(dim);
    for (Eigen::Index i = 0; i < dim; ++i) psi[i] = complexd(gauss(rng), gauss(rng));
    psi /= psi.norm();
    const Eigen::VectorXcd once = enc.apply_uh(psi);
    worst = std::max(worst, std::abs(once.norm() - 1.0));
    const Eigen::VectorXcd twice = enc.apply_uh(once);
    worst = std::max(worst, (twice - psi).cwiseAbs().maxCoeff());
  }
  check.unitarity_residual = worst;
  return check;
}

}  // namespace nmrq
