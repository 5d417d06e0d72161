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

#include "oqsim/operators.hpp"

#include <cmath>
#include <string>

namespace oqsim {

namespace {

int checked_square_qubits(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("operator is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             ", expected square");
    }
    return qubits_for_dim(static_cast<std::size_t>(m.rows()));
}

}  // namespace

double hermiticity_defect(const Matrix& a) { return max_abs(a - a.adjoint()); }

double unitarity_defect(const Matrix& u) {
    return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

double trace_distance(const Matrix& a, const Matrix& b) {
    const Matrix d = a - b;
    const Matrix herm = 0.5 * (d + d.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

OperatorMatrix::OperatorMatrix(Matrix m) : m_(std::move(m)) { qubits_ = checked_square_qubits(m_); }

OperatorMatrix OperatorMatrix::hermitian(Matrix m, const NumericPolicy& policy) {
    OperatorMatrix op(std::move(m));
    const double defect = hermiticity_defect(op.m_);
    if (defect > policy.structural_tol) {
        throw NumericError("operator is not hermitian (defect " + std::to_string(defect) + ")");
    }
    op.hermitian_ = true;
    return op;
}

StateVector::StateVector(Vector v, const NumericPolicy& policy) : v_(std::move(v)) {
    qubits_ = qubits_for_dim(static_cast<std::size_t>(v_.size()));
    const double norm = v_.norm();
    if (std::abs(norm - 1.0) > policy.structural_tol) {
        throw NumericError("state vector norm is " + std::to_string(norm) + ", expected 1");
    }
}

StateVector StateVector::basis(std::string_view bits) {
    if (bits.empty() || bits.size() > 63) {
        throw DimensionError("basis bitstring must have 1..63 characters");
    }
    std::uint64_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw DimensionError(std::string("invalid bit '") + c + "' in basis bitstring");
        }
        index = (index << 1) | static_cast<std::uint64_t>(c == '1');
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim_for_qubits(static_cast<int>(bits.size()))));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(std::move(v));
}

StateVector StateVector::product(std::span<const double> angles) {
    if (angles.empty()) {
        throw DimensionError("product state needs at least one site");
    }
    Vector v(1);
    v[0] = 1.0;
    for (double theta : angles) {
        Vector next(2 * v.size());
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            next[2 * k] = v[k] * std::cos(theta);
            next[2 * k + 1] = v[k] * std::sin(theta);
        }
        v = std::move(next);
    }
    return StateVector(std::move(v));
}

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) { qubits_ = checked_square_qubits(m_); }

DensityMatrix DensityMatrix::unchecked(Matrix m) { return DensityMatrix(std::move(m)); }

DensityMatrix DensityMatrix::validated(Matrix m, const NumericPolicy& policy) {
    DensityMatrix rho(std::move(m));
    const double herm = hermiticity_defect(rho.m_);
    if (herm > policy.structural_tol) {
        throw NumericError("density matrix is not hermitian (defect " + std::to_string(herm) + ")");
    }
    const double tr = rho.trace();
    if (std::abs(tr - 1.0) > policy.structural_tol) {
        throw NumericError("density matrix trace is " + std::to_string(tr));
    }
    const double lmin = rho.min_eigenvalue();
    if (lmin < policy.psd_tol) {
        throw NumericError("density matrix has eigenvalue " + std::to_string(lmin));
    }
    return rho;
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
    const auto dim = static_cast<Eigen::Index>(dim_for_qubits(n));
    return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
    const Matrix herm = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigenvalue solver failed on " + std::to_string(m_.rows()) + "-dimensional state");
    }
    return solver.eigenvalues().minCoeff();
}

OperatorMatrix hermitian_exponential(const OperatorMatrix& h, double t, const NumericPolicy& policy) {
    if (!h.is_hermitian()) {
        throw NumericError("hermitian_exponential requires a hermitian-tagged operator");
    }
    const Matrix herm = 0.5 * (h.matrix() + h.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigendecomposition failed for " + std::to_string(h.dim()) + "-dimensional operator");
    }
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    Vector phases(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        phases[k] = std::polar(1.0, -lambda[k] * t);
    }
    const Matrix& v = solver.eigenvectors();
    Matrix u = v * phases.asDiagonal() * v.adjoint();
    const double defect = unitarity_defect(u);
    if (defect > policy.structural_tol) {
        throw NumericError("exponential of " + std::to_string(h.dim()) + "-dimensional operator is not unitary (defect " +
                           std::to_string(defect) + ")");
    }
    return OperatorMatrix(std::move(u));
}

double expectation(const DensityMatrix& rho, const OperatorMatrix& o, const NumericPolicy& policy) {
    if (rho.dim() != o.dim()) {
        throw DimensionError("state dimension " + std::to_string(rho.dim()) + " does not match observable dimension " +
                             std::to_string(o.dim()));
    }
    if (!o.is_hermitian()) {
        throw NumericError("observable is not tagged hermitian");
    }
    const Complex tr = rho.matrix().cwiseProduct(o.matrix().transpose()).sum();
    if (std::abs(tr.imag()) > policy.physical_tol) {
        throw NumericError("Tr[rho O] has imaginary residue " + std::to_string(tr.imag()));
    }
    return tr.real();
}

double expectation(const DensityMatrix& rho, const PauliString& ps) {
    const std::size_t dim = rho.dim();
    if (dim != dim_for_qubits(ps.size())) {
        throw DimensionError("state dimension does not match Pauli string " + ps.str());
    }
    const std::uint64_t x = ps.x_mask();
    const std::uint64_t z = ps.z_mask();
    const Matrix& m = rho.matrix();
    Complex acc = 0.0;
    for (std::uint64_t b = 0; b < dim; ++b) {
        acc += m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b ^ x)) * z_sign(b, z);
    }
    return (i_power(ps.y_count()) * acc).real();
}

}  // namespace oqsim
