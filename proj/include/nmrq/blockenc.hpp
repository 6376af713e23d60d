#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nmrq/dynamics.hpp"
#include "nmrq/hamiltonian.hpp"

namespace nmrq {

// LCU block encoding U_H = (Prep^dag x I) Select (Prep x I) of H/alpha,
// with signs absorbed into the selected unitaries (signed Pauli strings)
// so Prepare loads real amplitudes sqrt(|c_i|/alpha). U_H^2 = I.
// State layout: index = ancilla * 2^n + system (ancilla-major).
struct BlockEncoding {
  int n = 0;           // system qubits
  int m = 0;           // ancilla qubits
  double alpha = 0.0;  // 1-norm
  Eigen::VectorXd amplitudes;           // g, size 2^m, zero-padded past M
  std::vector<PauliStringOp> selected;  // size 2^m, identity-padded

  Eigen::MatrixXcd prepare_dense() const;  // Householder: column 0 = g
  Eigen::MatrixXcd select_dense() const;
  Eigen::VectorXcd apply_uh(const Eigen::VectorXcd& psi) const;
  Eigen::VectorXcd apply_walk(const Eigen::VectorXcd& psi) const;  // R * U_H
};

// Throws std::invalid_argument for a Hamiltonian with no terms.
BlockEncoding make_block_encoding(const SpinHamiltonian& h);

// (<0| x I) U_H (|0> x I): the encoded system block, computed by applying
// U_H to ancilla-zero basis columns.
Eigen::MatrixXcd encoded_block(const BlockEncoding& enc);

// max-norm of (encoded block - (H - offset I)/alpha) against the
// independently-assembled dense Hamiltonian.
double block_residual(const BlockEncoding& enc, const SpinHamiltonian& h);

// Max mismatch between walk eigenphases and +-arccos(lambda) over all
// eigenvalues lambda of H/alpha, using the 2D invariant subspaces
// span{|0,v>, U_H|0,v>} (valid because U_H^2 = I).
double walk_phase_residual(const BlockEncoding& enc, const SpinHamiltonian& h);

struct BlockEncodingCheck {
  double block_residual = 0.0;
  double walk_residual = 0.0;
  double unitarity_residual = 0.0;  // ||U_H^dag U_H - I||_max
};
BlockEncodingCheck verify_block_encoding(const SpinHamiltonian& h);

}  // namespace nmrq
