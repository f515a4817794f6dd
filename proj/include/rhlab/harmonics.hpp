#pragma once

#include <complex>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "rhlab/grid.hpp"

namespace rhlab {

using cplx = std::complex<double>;

/// Coefficients c_j^m (0 <= m <= j <= L) of a real field on the sphere.
/// Negative orders follow c_j^{-m} = (-1)^m conj(c_j^m).
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(int L);

    static size_t index(int j, int m) { return static_cast<size_t>(j) * (j + 1) / 2 + m; }
    static size_t size_for(int L) { return static_cast<size_t>(L + 1) * (L + 2) / 2; }

    int L() const { return L_; }
    cplx& operator()(int j, int m) { return c_[index(j, m)]; }
    const cplx& operator()(int j, int m) const { return c_[index(j, m)]; }
    /// Any order -j <= m <= j; zero when j > L.
    cplx coeff(int j, int m) const;

    std::vector<cplx>& data() { return c_; }
    const std::vector<cplx>& data() const { return c_; }

    bool zero_mean() const { return c_.empty() || c_[0] == cplx(0.0); }
    void remove_mean() { if (!c_.empty()) c_[0] = 0.0; }

    /// Copy with truncation degree L (pads with zeros or drops high degrees).
    SpectralField truncated(int L) const;

    /// Squared L2 norm of the represented real field (both signs of m).
    double norm2() const;
    double norm() const;
    /// Squared L2 norm of the degree-j component.
    double degree_norm2(int j) const;
    /// Largest degree carrying a coefficient with modulus above tol.
    int effective_degree(double tol = 0.0) const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);

private:
    int L_ = -1;
    std::vector<cplx> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Real L2 inner product of two fields (same or different truncation).
double inner(const SpectralField& f, const SpectralField& g);

/// Real coordinates of a degree-2 field in the basis
/// {3sin^2(t)-1, sin(2t)cos(p), sin(2t)sin(p), cos^2(t)cos(2p), cos^2(t)sin(2p)}.
struct E2Coeffs {
    double a = 0, b = 0, c = 0, d = 0, e = 0;
};

/// a Y_1^0 + b Y_1^1 + c Y_1^{-1}; the field is real iff a is real and b = -conj(c).
struct Degree1 {
    cplx a = 0.0, b = 0.0, c = 0.0;
};

/// Throws std::invalid_argument when the triple does not describe a real field (tolerance `tol`).
void check_degree1_reality(const Degree1& y, double tol = 1e-12);
Degree1 degree1_component(const SpectralField& f);
SpectralField degree1_to_spectral(const Degree1& y, int L);

/// N_j^m P_j^m(mu) with the (-1)^m phase inside N_j^m.
double assoc_legendre_normalized(int j, int m, double mu);

/// All normalized values up to degree L at one point, indexed by SpectralField::index.
/// `s` is sqrt(1 - mu^2), passed separately so poles stay exact.
void legendre_all(int L, double mu, double s, double* out);

/// Per-grid transform tables and longitude FFT plans. Shared, read-only after construction.
class Transform {
public:
    explicit Transform(GridPtr grid);
    ~Transform();
    Transform(const Transform&) = delete;
    Transform& operator=(const Transform&) = delete;

    const GridSpec& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int nf() const { return nf_; }

    enum class Deriv { none, theta, phi };

    /// F[k*nf + m] = sum_j c_j^m d(P_j^m)(mu_k); entries with m > c.L are zeroed.
    void to_fourier(const SpectralField& c, Deriv d, cplx* F) const;
    /// Longitude synthesis of every latitude row; F is used as scratch.
    void fourier_to_grid(cplx* F, double* out) const;
    /// (2pi/n_lon) sum_i f_i e^{-i m phi_i} for every row.
    void grid_to_fourier(const double* in, cplx* F) const;
    /// Gauss quadrature of the per-row Fourier coefficients.
    SpectralField from_fourier(const cplx* F, int L) const;

    GridField synthesize(const SpectralField& c, Deriv d = Deriv::none) const;
    SpectralField analyze(const GridField& f, int L) const;

private:
    GridPtr grid_;
    int nf_ = 0;
    size_t row_ = 0;               // table entries per latitude
    std::vector<double> p_, dp_;   // [k * row_ + index(j, m)]
    void* plan_c2r_ = nullptr;
    void* plan_r2c_ = nullptr;
};

/// Cached transform for a grid (keyed by L, n_lat, n_lon).
std::shared_ptr<const Transform> transform_for(const GridPtr& grid);

SpectralField analyze(const GridField& f, int L);
GridField synthesize(const SpectralField& c, const GridPtr& spec);
double eval_point(const SpectralField& c, double phi, double theta);

SpectralField e2_to_spectral(const E2Coeffs& y, int L = 2);
/// Throws when energy outside degree 2 exceeds 1e-10 of the total.
E2Coeffs spectral_to_e2(const SpectralField& c);
/// Degree-2 part of any field, without the purity check.
E2Coeffs e2_component(const SpectralField& c);

/// Text format: "L <int>" then "j m re im" per stored coefficient.
void write_spectral(std::ostream& os, const SpectralField& c);
SpectralField read_spectral(std::istream& is);
void save_spectral(const std::string& path, const SpectralField& c);
SpectralField load_spectral(const std::string& path);

}  // namespace rhlab
