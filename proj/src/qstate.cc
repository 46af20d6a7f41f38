#include "wvsim/qstate.h"

#include <cmath>
#include <numbers>

#include "wvsim/error.h"

namespace wvsim {

PolarAngle::PolarAngle(double degrees) {
    if (!std::isfinite(degrees)) {
        throw Error(ErrorCode::InvalidArgument, "polarization angle must be finite");
    }
    double reduced = std::fmod(degrees, 360.0);
    if (reduced < 0) {
        reduced += 360.0;
    }
    // fmod of a tiny negative number can round up to exactly 360.
    if (reduced >= 360.0) {
        reduced = 0.0;
    }
    degrees_ = reduced;
}

double PolarAngle::radians() const noexcept { return degrees_ * std::numbers::pi / 180.0; }

QubitState QubitState::from_amplitudes(Complex amp_h, Complex amp_v) {
    auto finite = [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
    if (!finite(amp_h) || !finite(amp_v)) {
        throw Error(ErrorCode::InvalidArgument, "state amplitudes must be finite");
    }
    double norm = std::sqrt(std::norm(amp_h) + std::norm(amp_v));
    if (norm == 0) {
        throw Error(ErrorCode::InvalidArgument, "cannot normalize the zero vector");
    }
    return QubitState(amp_h / norm, amp_v / norm);
}

Matrix2 Matrix2::identity() {
    Matrix2 r;
    r(0, 0) = 1;
    r(1, 1) = 1;
    return r;
}

Matrix2 Matrix2::adjoint() const {
    Matrix2 r;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            r(i, j) = std::conj((*this)(j, i));
        }
    }
    return r;
}

Matrix2 Matrix2::operator*(const Matrix2 &other) const {
    Matrix2 r;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            r(i, j) = (*this)(i, 0) * other(0, j) + (*this)(i, 1) * other(1, j);
        }
    }
    return r;
}

Matrix2 Matrix2::operator+(const Matrix2 &other) const {
    Matrix2 r;
    for (size_t k = 0; k < 4; k++) {
        r.m[k] = m[k] + other.m[k];
    }
    return r;
}

Matrix2 Matrix2::operator*(Complex scale) const {
    Matrix2 r;
    for (size_t k = 0; k < 4; k++) {
        r.m[k] = m[k] * scale;
    }
    return r;
}

bool Matrix2::approx_equal(const Matrix2 &other, double tol) const {
    for (size_t k = 0; k < 4; k++) {
        if (std::abs(m[k] - other.m[k]) > tol) {
            return false;
        }
    }
    return true;
}

Observable::Observable(const Matrix2 &matrix) : matrix_(matrix) {
    for (const auto &c : matrix.m) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw Error(ErrorCode::InvalidArgument, "observable entries must be finite");
        }
    }
    if (!matrix.approx_equal(matrix.adjoint(), 1e-12)) {
        throw Error(ErrorCode::InvalidArgument, "observable is not Hermitian");
    }
}

std::array<double, 2> Observable::eigenvalues() const {
    double a = matrix_(0, 0).real();
    double d = matrix_(1, 1).real();
    double mid = (a + d) / 2;
    double half_gap = std::hypot((a - d) / 2, std::abs(matrix_(0, 1)));
    return {mid - half_gap, mid + half_gap};
}

double Observable::spectral_radius() const {
    auto ev = eigenvalues();
    return std::max(std::abs(ev[0]), std::abs(ev[1]));
}

QubitState linear_pol_state(PolarAngle angle) {
    double half = angle.radians() / 2;
    double c = std::cos(half);
    double s = std::sin(half);
    // half is in [0, pi), so s >= 0 and only c can be negative.
    if (c < 0) {
        c = -c;
        s = -s;
    }
    return QubitState::from_amplitudes(c, s);
}

Complex inner_product(const QubitState &bra, const QubitState &ket) {
    return std::conj(bra.amp_h()) * ket.amp_h() + std::conj(bra.amp_v()) * ket.amp_v();
}

Complex matrix_element(const QubitState &bra, const Matrix2 &op, const QubitState &ket) {
    Complex out_h = op(0, 0) * ket.amp_h() + op(0, 1) * ket.amp_v();
    Complex out_v = op(1, 0) * ket.amp_h() + op(1, 1) * ket.amp_v();
    return std::conj(bra.amp_h()) * out_h + std::conj(bra.amp_v()) * out_v;
}

Complex matrix_element(const QubitState &bra, const Observable &obs, const QubitState &ket) {
    return matrix_element(bra, obs.matrix(), ket);
}

Observable stokes_hv() {
    Matrix2 m;
    m(0, 0) = 1;
    m(1, 1) = -1;
    return Observable(m);
}

}  // namespace wvsim
