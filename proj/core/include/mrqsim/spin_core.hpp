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

// Dense state and gate algebra for a handful of qubits.
//
// Conventions used throughout the project:
//
//  * Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
//    a basis index. |q0 q1 ... q_{N-1}> has index sum_k q_k * 2^(N-1-k), so
//    in a two-qubit register |10> is index 2 and qubit 0 is the control of
//    the Bell circuit.
//  * R_a(theta) = exp(-i theta sigma_a / 2).
//  * States are compared through fidelity, which ignores global phase.
//
// All types validate their invariants on construction and throw
// InvariantError when a matrix or vector is outside tolerance.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace mrqsim::spin {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxQubits = 10;

// Tolerances for construction-time checks.
inline constexpr double kUnitaryTolerance = 1e-12;  // max-entry |U U^dag - I|
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kPsdSlack = 1e-12;  // smallest eigenvalue >= -slack
// Equivalence bound for derived quantities after several products.
inline constexpr double kPropertyTolerance = 1e-10;

enum class Axis { x, y, z };

std::string_view to_string(Axis axis);
/// Accepts "x", "y", "z" (case-insensitive). Throws ConfigError.
Axis parse_axis(std::string_view text);

/// Largest entry of |a - b|. Dimensions must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Number of qubits N for a 2^N dimension; throws InvariantError when the
/// dimension is not a power of two in [2, 2^kMaxQubits].
int qubits_for_dimension(Eigen::Index dimension);

class StateVector {
 public:
  /// Requires a power-of-two dimension and unit norm within kNormTolerance.
  explicit StateVector(Vector amplitudes);

  /// Computational basis state |index> of an n-qubit register.
  static StateVector basis(int n_qubits, std::size_t index);
  /// Basis state from a bit string such as "01" (qubit 0 first).
  static StateVector from_bits(std::string_view bits);
  /// Divides by the Euclidean norm. Throws DomainError for a zero vector.
  static StateVector normalized(Vector raw);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dimension() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

 private:
  Vector amplitudes_;
  int n_qubits_ = 0;
};

class UnitaryGate {
 public:
  /// Requires a square power-of-two matrix with U U^dag = I within
  /// kUnitaryTolerance (max-entry norm).
  UnitaryGate(Matrix matrix, std::string label);

  static UnitaryGate identity(int n_qubits);

  const Matrix& matrix() const { return matrix_; }
  const std::string& label() const { return label_; }
  int n_qubits() const { return n_qubits_; }
  Eigen::Index dimension() const { return matrix_.rows(); }

  UnitaryGate adjoint() const;
  /// phase * U; |phase| must be 1.
  UnitaryGate with_phase(Complex phase, std::string label) const;
  UnitaryGate relabeled(std::string label) const;

  /// Throws DomainError on a dimension mismatch.
  StateVector apply(const StateVector& state) const;

 private:
  Matrix matrix_;
  std::string label_;
  int n_qubits_ = 0;
};

/// Matrix product a * b, i.e. b acts first. Throws DomainError on mismatch.
UnitaryGate operator*(const UnitaryGate& a, const UnitaryGate& b);

/// Tensor product a (x) b; a occupies the leading qubits.
UnitaryGate kron(const UnitaryGate& a, const UnitaryGate& b);

/// Single-qubit gate acting on `qubit` of an n-qubit register.
UnitaryGate embed(const UnitaryGate& single, int qubit, int n_qubits);

/// |0><0|_c (x) I + |1><1|_c (x) U_t, embedded in n qubits.
/// Throws ConfigError for colliding or out-of-range indices.
UnitaryGate controlled(const UnitaryGate& single, int control, int target, int n_qubits);

class DensityMatrix {
 public:
  /// Requires Hermitian, unit trace and eigenvalues >= -kPsdSlack.
  explicit DensityMatrix(Matrix matrix);

  static DensityMatrix pure(const StateVector& state);
  static DensityMatrix maximally_mixed(int n_qubits);

  const Matrix& matrix() const { return matrix_; }
  int n_qubits() const { return n_qubits_; }
  Eigen::Index dimension() const { return matrix_.rows(); }

  Complex trace() const { return matrix_.trace(); }
  /// tr(rho^2)
  double purity() const;
  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const;

 private:
  Matrix matrix_;
  int n_qubits_ = 0;
};

/// rho = impure/2^N * I + (1 - impure) |psi><psi|.
///
/// The impure fraction 1 - epsilon is stored directly so that repeated
/// purification keeps full relative precision once it becomes tiny.
class PseudoPureSpec {
 public:
  /// Throws DomainError unless 0 <= epsilon <= 1.
  static PseudoPureSpec from_epsilon(double epsilon, StateVector pure_state);
  /// Throws DomainError unless 0 <= impure_fraction <= 1.
  static PseudoPureSpec from_impure_fraction(double impure_fraction, StateVector pure_state);

  int n_qubits() const { return pure_state_.n_qubits(); }
  double epsilon() const { return 1.0 - impure_fraction_; }
  double impure_fraction() const { return impure_fraction_; }
  const StateVector& pure_state() const { return pure_state_; }

 private:
  PseudoPureSpec(double impure_fraction, StateVector pure_state)
      : impure_fraction_(impure_fraction), pure_state_(std::move(pure_state)) {}

  double impure_fraction_;
  StateVector pure_state_;
};

/// exp(-i angle sigma_axis / 2). Throws DomainError for a non-finite angle.
UnitaryGate rotation_gate(Axis axis, double angle);

/// (1/sqrt 2) [[1, 1], [1, -1]]
UnitaryGate canonical_hadamard();

/// i * R_x(pi) * R_y(pi/2), which equals the canonical Hadamard.
UnitaryGate hadamard_via_rotations();

/// Flips `target` iff `control` is |1>; qubit ordering as documented above.
UnitaryGate cnot_gate(int control, int target, int n_qubits);

DensityMatrix pseudo_pure_density(const PseudoPureSpec& spec);

/// U rho U^dag. Throws DomainError on a dimension mismatch.
DensityMatrix conjugate_density(const DensityMatrix& rho, const UnitaryGate& u);

/// Scales the impure fraction by step_factor; the pure state is unchanged.
/// Throws DomainError unless 0 < step_factor <= 1.
PseudoPureSpec purify_step(const PseudoPureSpec& spec, double step_factor);

/// |<a|b>|^2. Throws DomainError on a dimension mismatch.
double state_fidelity(const StateVector& a, const StateVector& b);

struct BellState {
  std::string label;
  StateVector state;
};

/// Phi+, Phi-, Psi+, Psi- in that order.
std::array<BellState, 4> bell_states();

/// Recovers epsilon and |psi> from a density matrix assumed to be
/// pseudo-pure: epsilon = lambda_max - lambda_min, |psi> the top eigenvector.
/// `residual` is the max-entry distance between rho and the rebuilt
/// pseudo-pure matrix, so callers can check the structure actually holds.
struct PseudoPureDecomposition {
  double epsilon = 0.0;
  StateVector pure_state;
  double residual = 0.0;
};
PseudoPureDecomposition decompose_pseudo_pure(const DensityMatrix& rho);

}  // namespace mrqsim::spin
