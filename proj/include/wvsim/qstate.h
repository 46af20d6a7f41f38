#ifndef WVSIM_QSTATE_H
#define WVSIM_QSTATE_H

#include <array>
#include <complex>

namespace wvsim {

using Complex = std::complex<double>;

/// Angle on the great circle of linear polarizations of the Poincare sphere.
/// 0 is H, 90 is D, 180 is V, 270 is A. Stored in degrees, reduced to [0, 360).
class PolarAngle {
   public:
    explicit PolarAngle(double degrees);

    double degrees() const noexcept { return degrees_; }
    double radians() const noexcept;

   private:
    double degrees_;
};

/// Normalized polarization qubit a|H> + b|V>.
class QubitState {
   public:
    /// Normalizes the given amplitudes. Throws InvalidArgument for the zero
    /// vector or non-finite input.
    static QubitState from_amplitudes(Complex amp_h, Complex amp_v);

    Complex amp_h() const noexcept { return h_; }
    Complex amp_v() const noexcept { return v_; }

   private:
    QubitState(Complex h, Complex v) : h_(h), v_(v) {}
    Complex h_;
    Complex v_;
};

/// General 2x2 complex matrix in the {H, V} basis, row-major.
struct Matrix2 {
    std::array<Complex, 4> m{};

    Complex operator()(int row, int col) const { return m[2 * row + col]; }
    Complex &operator()(int row, int col) { return m[2 * row + col]; }

    static Matrix2 identity();
    Matrix2 adjoint() const;
    Matrix2 operator*(const Matrix2 &other) const;
    Matrix2 operator+(const Matrix2 &other) const;
    Matrix2 operator*(Complex scale) const;
    bool approx_equal(const Matrix2 &other, double tol) const;
};

/// Hermitian 2x2 operator.
class Observable {
   public:
    /// Throws InvalidArgument unless the matrix is Hermitian within 1e-12.
    explicit Observable(const Matrix2 &matrix);

    const Matrix2 &matrix() const noexcept { return matrix_; }
    /// Largest absolute eigenvalue.
    double spectral_radius() const;
    /// Eigenvalues in ascending order.
    std::array<double, 2> eigenvalues() const;

   private:
    Matrix2 matrix_;
};

/// cos(t/2)|H> + sin(t/2)|V>, with the global sign fixed so the H amplitude is
/// nonnegative (|V> when it vanishes).
QubitState linear_pol_state(PolarAngle angle);

/// <bra|ket>, conjugate-linear in the first argument.
Complex inner_product(const QubitState &bra, const QubitState &ket);

Complex matrix_element(const QubitState &bra, const Observable &obs, const QubitState &ket);
Complex matrix_element(const QubitState &bra, const Matrix2 &op, const QubitState &ket);

/// Stokes observable |H><H| - |V><V|.
Observable stokes_hv();

}  // namespace wvsim

#endif
