#include "solab/tensor.hpp"

#include <algorithm>

namespace solab {

std::string variance_string(const Variance& v) {
    const auto up = std::count(v.begin(), v.end(), Slot::Up);
    return "(" + std::to_string(up) + "," + std::to_string(static_cast<long>(v.size()) - up) + ")";
}

TensorAtPoint TensorAtPoint::identity(std::size_t dim) {
    TensorAtPoint t(dim, {Slot::Up, Slot::Down});
    for (std::size_t i = 0; i < dim; ++i) t(i, i) = 1.0;
    return t;
}

TensorAtPoint& TensorAtPoint::operator+=(const TensorAtPoint& o) {
    if (o.dim() != dim() || o.variance() != variance()) throw InvalidArgument("tensor shape mismatch in +");
    for (std::size_t f = 0; f < size(); ++f) (*this)[f] += o[f];
    return *this;
}

TensorAtPoint& TensorAtPoint::operator-=(const TensorAtPoint& o) {
    if (o.dim() != dim() || o.variance() != variance()) throw InvalidArgument("tensor shape mismatch in -");
    for (std::size_t f = 0; f < size(); ++f) (*this)[f] -= o[f];
    return *this;
}

TensorAtPoint& TensorAtPoint::operator*=(double s) {
    for (double& c : components()) c *= s;
    return *this;
}

double TensorAtPoint::max_abs() const {
    double m = 0.0;
    for (double c : components()) m = std::max(m, std::fabs(c));
    return m;
}

double TensorAtPoint::frobenius() const {
    double s = 0.0;
    for (double c : components()) s += c * c;
    return std::sqrt(s);
}

TensorAtPoint values_of(const JetTensor& t) {
    std::vector<double> v(t.size());
    for (std::size_t f = 0; f < t.size(); ++f) v[f] = t[f].value();
    return TensorAtPoint(t.dim(), t.variance(), std::move(v));
}

TensorAtPoint permute_slots(const TensorAtPoint& t, std::span<const std::size_t> perm) {
    const std::size_t r = t.rank();
    const std::size_t n = t.dim();
    if (perm.size() != r) throw InvalidArgument("permutation length differs from rank");
    Variance var(r);
    for (std::size_t s = 0; s < r; ++s) var[s] = t.variance()[perm[s]];
    TensorAtPoint out(n, var);
    std::vector<std::size_t> src(r), dst(r);
    for (std::size_t f = 0; f < t.size(); ++f) {
        std::size_t rem = f;
        for (std::size_t s = r; s-- > 0;) {
            src[s] = rem % n;
            rem /= n;
        }
        for (std::size_t s = 0; s < r; ++s) dst[s] = src[perm[s]];
        out[out.flat(dst)] = t[f];
    }
    return out;
}

} // namespace solab
