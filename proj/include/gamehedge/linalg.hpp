#pragma once

#include "gamehedge/rational.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <string>
#include <vector>

namespace gamehedge {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorQ = VectorX<Rational>;
using MatrixQ = MatrixX<Rational>;
using VectorZ = VectorX<Integer>;

inline VectorQ zeros(Eigen::Index d) { return VectorQ::Constant(d, Rational(0)); }

inline VectorQ unit(Eigen::Index d, Eigen::Index i) {
    VectorQ e = zeros(d);
    e(i) = 1;
    return e;
}

template <typename DerivedA, typename DerivedB>
Rational dot(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    Rational s = 0;
    for (Eigen::Index k = 0; k < a.size(); ++k) s += a(k) * b(k);
    return s;
}

inline bool is_zero(const VectorQ& v) {
    for (Eigen::Index k = 0; k < v.size(); ++k)
        if (v(k) != 0) return false;
    return true;
}

/// Strict lexicographic order on coordinates.
bool lex_less(const VectorQ& a, const VectorQ& b);

/// Positive multiple of v with coprime integer entries (zero stays zero).
VectorZ primitive(const VectorQ& v);
/// In-place gcd reduction of an integer vector.
void make_primitive(VectorZ& v);
/// Integer dot product.
Integer dot(const VectorZ& a, const VectorZ& b);
/// Primitive form of a * x + b * y.
VectorZ combine(const Integer& a, const VectorZ& x, const Integer& b, const VectorZ& y);

VectorQ to_rational(const VectorZ& v);

/// "(a, b, c)" with exact entries.
std::string format_vector(const VectorQ& v);

VectorQ make_vector(std::initializer_list<Rational> entries);
VectorQ parse_vector(const std::vector<std::string>& entries);

}  // namespace gamehedge
