// Copyright 2026 The mrqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrqsim/spin_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mrqsim/errors.hpp"

namespace mrqsim::spin {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_same_dimension(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DomainError(msg.str());
  }
}

Matrix pauli(Axis axis) {
  Matrix s(2, 2);
  switch (axis) {
    case Axis::x:
      s << 0.0, 1.0, 1.0, 0.0;
      break;
    case Axis::y:
      s << 0.0, -kI, kI, 0.0;
      break;
    case Axis::z:
      s << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return s;
}

}  // namespace

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::x:
      return "x";
    case Axis::y:
      return "y";
    case Axis::z:
      return "z";
  }
  return "?";
}

Axis parse_axis(std::string_view text) {
  if (text.size() == 1) {
    switch (std::tolower(static_cast<unsigned char>(text[0]))) {
      case 'x':
        return Axis::x;
      case 'y':
        return Axis::y;
      case 'z':
        return Axis::z;
      default:
        break;
    }
  }
  throw ConfigError("unknown rotation axis '" + std::string(text) + "' (expected x, y or z)");
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DomainError("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

int qubits_for_dimension(Eigen::Index dimension) {
  for (int n = 1; n <= kMaxQubits; ++n) {
    if (dimension == (Eigen::Index{1} << n)) return n;
  }
  std::ostringstream msg;
  msg << "dimension " << dimension << " is not 2^N with 1 <= N <= " << kMaxQubits;
  throw InvariantError(msg.str());
}

// --- StateVector -----------------------------------------------------------

StateVector::StateVector(Vector amplitudes)
    : amplitudes_(std::move(amplitudes)), n_qubits_(qubits_for_dimension(amplitudes_.size())) {
  const double norm = amplitudes_.norm();
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    std::ostringstream msg;
    msg << "state vector norm " << norm << " differs from 1";
    throw InvariantError(msg.str());
  }
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw DomainError("basis: qubit count out of range");
  }
  const auto dim = Eigen::Index{1} << n_qubits;
  if (static_cast<Eigen::Index>(index) >= dim) {
    throw DomainError("basis: index out of range");
  }
  Vector v = Vector::Zero(dim);
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::from_bits(std::string_view bits) {
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw DomainError("from_bits: expected only '0' and '1'");
    }
    index = (index << 1) | static_cast<std::size_t>(c == '1');
  }
  return basis(static_cast<int>(bits.size()), index);
}

StateVector StateVector::normalized(Vector raw) {
  const double norm = raw.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DomainError("normalized: vector has zero or non-finite norm");
  }
  raw /= norm;
  return StateVector(std::move(raw));
}

// --- UnitaryGate -----------------------------------------------------------

UnitaryGate::UnitaryGate(Matrix matrix, std::string label)
    : matrix_(std::move(matrix)), label_(std::move(label)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw InvariantError("gate '" + label_ + "' is not square");
  }
  n_qubits_ = qubits_for_dimension(matrix_.rows());
  const Matrix product = matrix_ * matrix_.adjoint();
  const double err = max_abs_diff(product, Matrix::Identity(matrix_.rows(), matrix_.cols()));
  if (!(err <= kUnitaryTolerance)) {
    std::ostringstream msg;
    msg << "gate '" << label_ << "' is not unitary (max |U U^dag - I| = " << err << ")";
    throw InvariantError(msg.str());
  }
}

UnitaryGate UnitaryGate::identity(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw DomainError("identity: qubit count out of range");
  }
  const auto dim = Eigen::Index{1} << n_qubits;
  return UnitaryGate(Matrix::Identity(dim, dim), "I");
}

UnitaryGate UnitaryGate::adjoint() const { return UnitaryGate(matrix_.adjoint(), label_ + "^dag"); }

UnitaryGate UnitaryGate::with_phase(Complex phase, std::string label) const {
  if (!(std::abs(std::abs(phase) - 1.0) <= kUnitaryTolerance)) {
    throw DomainError("with_phase: phase must have unit modulus");
  }
  return UnitaryGate(phase * matrix_, std::move(label));
}

UnitaryGate UnitaryGate::relabeled(std::string label) const {
  UnitaryGate copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

StateVector UnitaryGate::apply(const StateVector& state) const {
  require_same_dimension(dimension(), state.dimension(), "apply");
  return StateVector(matrix_ * state.amplitudes());
}

UnitaryGate operator*(const UnitaryGate& a, const UnitaryGate& b) {
  require_same_dimension(a.dimension(), b.dimension(), "gate product");
  return UnitaryGate(a.matrix() * b.matrix(), a.label() + "*" + b.label());
}

UnitaryGate kron(const UnitaryGate& a, const UnitaryGate& b) {
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return UnitaryGate(std::move(out), a.label() + "(x)" + b.label());
}

UnitaryGate embed(const UnitaryGate& single, int qubit, int n_qubits) {
  if (single.n_qubits() != 1) {
    throw DomainError("embed: expected a single-qubit gate");
  }
  if (n_qubits < 1 || n_qubits > kMaxQubits || qubit < 0 || qubit >= n_qubits) {
    throw ConfigError("embed: qubit index out of range");
  }
  const UnitaryGate id = UnitaryGate::identity(1);
  UnitaryGate acc = qubit == 0 ? single : id;
  for (int q = 1; q < n_qubits; ++q) {
    acc = kron(acc, q == qubit ? single : id);
  }
  return acc.relabeled(single.label() + "[" + std::to_string(qubit) + "]");
}

UnitaryGate controlled(const UnitaryGate& single, int control, int target, int n_qubits) {
  if (single.n_qubits() != 1) {
    throw DomainError("controlled: expected a single-qubit gate");
  }
  if (n_qubits < 2 || n_qubits > kMaxQubits) {
    throw ConfigError("controlled: need 2..10 qubits");
  }
  if (control < 0 || control >= n_qubits || target < 0 || target >= n_qubits) {
    throw ConfigError("controlled: qubit index out of range");
  }
  if (control == target) {
    throw ConfigError("controlled: control and target must differ");
  }
  const auto dim = Eigen::Index{1} << n_qubits;
  const int control_shift = n_qubits - 1 - control;
  const int target_shift = n_qubits - 1 - target;
  const Matrix& u = single.matrix();

  Matrix out = Matrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    if (((col >> control_shift) & 1) == 0) {
      out(col, col) = 1.0;
      continue;
    }
    const Eigen::Index t_in = (col >> target_shift) & 1;
    for (Eigen::Index t_out = 0; t_out < 2; ++t_out) {
      const Eigen::Index row = (col & ~(Eigen::Index{1} << target_shift)) | (t_out << target_shift);
      out(row, col) = u(t_out, t_in);
    }
  }
  std::ostringstream label;
  label << "C" << single.label() << "[" << control << "->" << target << "]";
  return UnitaryGate(std::move(out), label.str());
}

// --- DensityMatrix ---------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw InvariantError("density matrix is not square");
  }
  n_qubits_ = qubits_for_dimension(matrix_.rows());

  const double herm = max_abs_diff(matrix_, matrix_.adjoint());
  if (!(herm <= kHermitianTolerance)) {
    std::ostringstream msg;
    msg << "density matrix is not Hermitian (max |rho - rho^dag| = " << herm << ")";
    throw InvariantError(msg.str());
  }
  const Complex tr = matrix_.trace();
  if (!(std::abs(tr - 1.0) <= kTraceTolerance)) {
    std::ostringstream msg;
    msg << "density matrix trace " << tr << " differs from 1";
    throw InvariantError(msg.str());
  }
  const double lowest = eigenvalues()[0];
  if (!(lowest >= -kPsdSlack)) {
    std::ostringstream msg;
    msg << "density matrix has negative eigenvalue " << lowest;
    throw InvariantError(msg.str());
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& state) {
  const Vector& v = state.amplitudes();
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw DomainError("maximally_mixed: qubit count out of range");
  }
  const auto dim = Eigen::Index{1} << n_qubits;
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return matrix_.cwiseAbs2().sum();
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  // Hermitian part only; the anti-Hermitian residue is below tolerance.
  const Matrix h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// --- PseudoPureSpec --------------------------------------------------------

PseudoPureSpec PseudoPureSpec::from_epsilon(double epsilon, StateVector pure_state) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw DomainError("pseudo-pure epsilon must lie in [0, 1]");
  }
  return PseudoPureSpec(1.0 - epsilon, std::move(pure_state));
}

PseudoPureSpec PseudoPureSpec::from_impure_fraction(double impure_fraction,
                                                    StateVector pure_state) {
  if (!(impure_fraction >= 0.0 && impure_fraction <= 1.0)) {
    throw DomainError("pseudo-pure impure fraction must lie in [0, 1]");
  }
  return PseudoPureSpec(impure_fraction, std::move(pure_state));
}

// --- operations ------------------------------------------------------------

UnitaryGate rotation_gate(Axis axis, double angle) {
  if (!std::isfinite(angle)) {
    throw DomainError("rotation_gate: angle must be finite");
  }
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Matrix m = c * Matrix::Identity(2, 2) - kI * s * pauli(axis);
  std::ostringstream label;
  label << "R" << to_string(axis) << "(" << angle << ")";
  return UnitaryGate(std::move(m), label.str());
}

UnitaryGate canonical_hadamard() {
  Matrix h(2, 2);
  const double r = 1.0 / std::numbers::sqrt2;
  h << r, r, r, -r;
  return UnitaryGate(std::move(h), "H");
}

UnitaryGate hadamard_via_rotations() {
  const UnitaryGate rx = rotation_gate(Axis::x, std::numbers::pi);
  const UnitaryGate ry = rotation_gate(Axis::y, std::numbers::pi / 2.0);
  return (rx * ry).with_phase(kI, "H");
}

UnitaryGate cnot_gate(int control, int target, int n_qubits) {
  Matrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  return controlled(UnitaryGate(std::move(x), "X"), control, target, n_qubits)
      .relabeled("CNOT[" + std::to_string(control) + "->" + std::to_string(target) + "]");
}

DensityMatrix pseudo_pure_density(const PseudoPureSpec& spec) {
  const Vector& psi = spec.pure_state().amplitudes();
  const auto dim = psi.size();
  const double impure = spec.impure_fraction();
  Matrix rho = (impure / static_cast<double>(dim)) * Matrix::Identity(dim, dim) +
               spec.epsilon() * (psi * psi.adjoint());
  return DensityMatrix(std::move(rho));
}

DensityMatrix conjugate_density(const DensityMatrix& rho, const UnitaryGate& u) {
  require_same_dimension(rho.dimension(), u.dimension(), "conjugate_density");
  Matrix out = u.matrix() * rho.matrix() * u.matrix().adjoint();
  // Restore exact Hermiticity lost to rounding in the triple product.
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out));
}

PseudoPureSpec purify_step(const PseudoPureSpec& spec, double step_factor) {
  if (!(step_factor > 0.0 && step_factor <= 1.0)) {
    throw DomainError("purify_step: step factor must lie in (0, 1]");
  }
  return PseudoPureSpec::from_impure_fraction(spec.impure_fraction() * step_factor,
                                              spec.pure_state());
}

double state_fidelity(const StateVector& a, const StateVector& b) {
  require_same_dimension(a.dimension(), b.dimension(), "state_fidelity");
  const double f = std::norm(a.amplitudes().dot(b.amplitudes()));
  return std::clamp(f, 0.0, 1.0);
}

std::array<BellState, 4> bell_states() {
  const double r = 1.0 / std::numbers::sqrt2;
  auto make = [r](int i0, int i1, double sign) {
    Vector v = Vector::Zero(4);
    v[i0] = r;
    v[i1] = sign * r;
    return StateVector(std::move(v));
  };
  return {BellState{"Phi+", make(0b00, 0b11, 1.0)}, BellState{"Phi-", make(0b00, 0b11, -1.0)},
          BellState{"Psi+", make(0b01, 0b10, 1.0)}, BellState{"Psi-", make(0b01, 0b10, -1.0)}};
}

PseudoPureDecomposition decompose_pseudo_pure(const DensityMatrix& rho) {
  const Matrix h = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const auto dim = lambda.size();
  const double epsilon = lambda[dim - 1] - lambda[0];
  StateVector psi = StateVector::normalized(solver.eigenvectors().col(dim - 1));

  const double impure = 1.0 - epsilon;
  const Matrix rebuilt = (impure / static_cast<double>(dim)) * Matrix::Identity(dim, dim) +
                         epsilon * (psi.amplitudes() * psi.amplitudes().adjoint());
  const double residual = max_abs_diff(rebuilt, rho.matrix());
  return PseudoPureDecomposition{epsilon, std::move(psi), residual};
}

}  // namespace mrqsim::spin
