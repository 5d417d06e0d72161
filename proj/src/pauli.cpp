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

#include "oqsim/pauli.hpp"

#include <string>

namespace oqsim {

namespace {

Pauli letter_to_pauli(char c) {
    switch (c) {
        case 'I': case 'i': return Pauli::I;
        case 'X': case 'x': return Pauli::X;
        case 'Y': case 'y': return Pauli::Y;
        case 'Z': case 'z': return Pauli::Z;
        default: throw DimensionError(std::string("invalid Pauli letter '") + c + "'");
    }
}

}  // namespace

PauliString::PauliString(std::string_view letters) {
    letters_.reserve(letters.size());
    for (char c : letters) {
        letters_.push_back(letter_to_pauli(c));
    }
    index();
}

PauliString::PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) { index(); }

PauliString PauliString::single(int n, int site, Pauli p) {
    if (site < 0 || site >= n) {
        throw DimensionError("site " + std::to_string(site) + " out of range for " + std::to_string(n) + " qubits");
    }
    std::vector<Pauli> letters(static_cast<std::size_t>(n), Pauli::I);
    letters[static_cast<std::size_t>(site)] = p;
    return PauliString(std::move(letters));
}

PauliString PauliString::identity(int n) { return PauliString(std::vector<Pauli>(static_cast<std::size_t>(n), Pauli::I)); }

void PauliString::index() {
    const int n = size();
    if (n < 1 || n > 63) {
        throw DimensionError("Pauli string length must be in [1, 63], got " + std::to_string(n));
    }
    x_mask_ = z_mask_ = 0;
    y_count_ = 0;
    for (int q = 0; q < n; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
        switch (letters_[static_cast<std::size_t>(q)]) {
            case Pauli::I: break;
            case Pauli::X: x_mask_ |= bit; break;
            case Pauli::Z: z_mask_ |= bit; break;
            case Pauli::Y:
                x_mask_ |= bit;
                z_mask_ |= bit;
                ++y_count_;
                break;
        }
    }
}

std::string PauliString::str() const {
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    std::string s;
    s.reserve(letters_.size());
    for (Pauli p : letters_) {
        s.push_back(kLetters[static_cast<int>(p)]);
    }
    return s;
}

Complex i_power(int k) noexcept {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

Matrix pauli_matrix(const PauliString& ps, const NumericPolicy& policy) {
    if (ps.size() > policy.max_qubits) {
        throw DimensionError("Pauli string on " + std::to_string(ps.size()) + " qubits exceeds the limit of " +
                             std::to_string(policy.max_qubits));
    }
    const std::size_t dim = dim_for_qubits(ps.size());
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    add_pauli_term(m, 1.0, ps);
    return m;
}

void add_pauli_term(Matrix& m, Complex coeff, const PauliString& ps) {
    const std::size_t dim = dim_for_qubits(ps.size());
    if (static_cast<std::size_t>(m.rows()) != dim || m.rows() != m.cols()) {
        throw DimensionError("operator dimension does not match Pauli string " + ps.str());
    }
    const Complex phase = coeff * i_power(ps.y_count());
    const std::uint64_t x = ps.x_mask();
    const std::uint64_t z = ps.z_mask();
    for (std::uint64_t b = 0; b < dim; ++b) {
        m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += phase * z_sign(b, z);
    }
}

Vector apply_pauli(const PauliString& ps, const Vector& v) {
    const std::size_t dim = dim_for_qubits(ps.size());
    if (static_cast<std::size_t>(v.size()) != dim) {
        throw DimensionError("state of length " + std::to_string(v.size()) + " does not match Pauli string " +
                             ps.str());
    }
    const Complex phase = i_power(ps.y_count());
    const std::uint64_t x = ps.x_mask();
    const std::uint64_t z = ps.z_mask();
    Vector out(v.size());
    for (std::uint64_t b = 0; b < dim; ++b) {
        out[static_cast<Eigen::Index>(b ^ x)] = phase * z_sign(b, z) * v[static_cast<Eigen::Index>(b)];
    }
    return out;
}

double pauli_expectation(const PauliString& ps, const Vector& v) {
    const std::size_t dim = dim_for_qubits(ps.size());
    if (static_cast<std::size_t>(v.size()) != dim) {
        throw DimensionError("state length does not match Pauli string " + ps.str());
    }
    const std::uint64_t x = ps.x_mask();
    const std::uint64_t z = ps.z_mask();
    Complex acc = 0.0;
    for (std::uint64_t b = 0; b < dim; ++b) {
        acc += std::conj(v[static_cast<Eigen::Index>(b ^ x)]) * z_sign(b, z) * v[static_cast<Eigen::Index>(b)];
    }
    return (i_power(ps.y_count()) * acc).real();
}

double pauli_sum_expectation(std::span<const PauliTerm> sum, const Vector& v) {
    double acc = 0.0;
    for (const auto& term : sum) {
        acc += term.coeff * pauli_expectation(term.string, v);
    }
    return acc;
}

}  // namespace oqsim
