// Copyright 2026 The oqsim Authors
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

#pragma once

#include "oqsim/common.hpp"
#include "oqsim/pauli.hpp"

namespace oqsim {

/// Square operator on n qubits. `hermitian` is a verified tag, not a hint.
class OperatorMatrix {
  public:
    /// Untagged operator; throws DimensionError if not square power-of-two.
    explicit OperatorMatrix(Matrix m);

    /// Checks hermiticity entrywise to policy.structural_tol and tags it.
    static OperatorMatrix hermitian(Matrix m, const NumericPolicy& policy = default_policy());

    const Matrix& matrix() const noexcept { return m_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    int qubits() const noexcept { return qubits_; }
    bool is_hermitian() const noexcept { return hermitian_; }

  private:
    Matrix m_;
    int qubits_ = 0;
    bool hermitian_ = false;
};

/// Normalized pure state.
class StateVector {
  public:
    /// Throws NumericError unless |v| = 1 within policy.structural_tol.
    explicit StateVector(Vector v, const NumericPolicy& policy = default_policy());

    /// Computational basis state from a bitstring such as "0101" (qubit 0 first).
    static StateVector basis(std::string_view bits);

    /// Product state (cos t_i |0> + sin t_i |1>) over sites.
    static StateVector product(std::span<const double> angles);

    const Vector& amplitudes() const noexcept { return v_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.size()); }
    int qubits() const noexcept { return qubits_; }

  private:
    Vector v_;
    int qubits_ = 0;
};

/// Hermitian, unit-trace, PSD density matrix.
///
/// `validated` enforces the invariants; `unchecked` is for states whose
/// positivity is a quality metric rather than a precondition (reconstructed
/// states, integrator intermediates). Both check shape.
class DensityMatrix {
  public:
    static DensityMatrix validated(Matrix m, const NumericPolicy& policy = default_policy());
    static DensityMatrix unchecked(Matrix m);
    static DensityMatrix pure(const StateVector& psi);
    static DensityMatrix maximally_mixed(int n);

    const Matrix& matrix() const noexcept { return m_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    int qubits() const noexcept { return qubits_; }

    double trace() const { return m_.trace().real(); }
    double purity() const;
    double min_eigenvalue() const;

  private:
    explicit DensityMatrix(Matrix m);

    Matrix m_;
    int qubits_ = 0;
};

/// e^{-iHt} via Hermitian eigendecomposition.
OperatorMatrix hermitian_exponential(const OperatorMatrix& h, double t,
                                     const NumericPolicy& policy = default_policy());

/// Re Tr[rho O]. Throws NumericError if the imaginary residue exceeds
/// policy.physical_tol.
double expectation(const DensityMatrix& rho, const OperatorMatrix& o,
                   const NumericPolicy& policy = default_policy());

/// Re Tr[rho P] for a Pauli string, O(4^n) worst case but without forming P.
double expectation(const DensityMatrix& rho, const PauliString& ps);

/// ||A - A^dagger||_max
double hermiticity_defect(const Matrix& a);

/// ||U^dagger U - I||_max
double unitarity_defect(const Matrix& u);

/// 0.5 * sum |eigenvalues(a - b)|
double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace oqsim
