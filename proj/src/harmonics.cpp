#include "rhlab/harmonics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace rhlab {

namespace {

constexpr double kPi = std::numbers::pi;

// The FFTW planner is not thread-safe; execution with the new-array API is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

// ---------------------------------------------------------------- SpectralField

SpectralField::SpectralField(int L) : L_(L), c_(size_for(L), cplx(0.0)) {
    if (L < 0) throw std::invalid_argument("SpectralField: L must be non-negative");
}

cplx SpectralField::coeff(int j, int m) const {
    if (j > L_ || std::abs(m) > j) return 0.0;
    if (m >= 0) return c_[index(j, m)];
    cplx v = std::conj(c_[index(j, -m)]);
    return (m % 2 == 0) ? v : -v;
}

SpectralField SpectralField::truncated(int L) const {
    SpectralField out(L);
    const int lmin = std::min(L, L_);
    for (int j = 0; j <= lmin; ++j)
        for (int m = 0; m <= j; ++m) out(j, m) = (*this)(j, m);
    return out;
}

double SpectralField::degree_norm2(int j) const {
    if (j > L_) return 0.0;
    double s = std::norm(c_[index(j, 0)]);
    for (int m = 1; m <= j; ++m) s += 2.0 * std::norm(c_[index(j, m)]);
    return s;
}

double SpectralField::norm2() const {
    double s = 0.0;
    for (int j = 0; j <= L_; ++j) s += degree_norm2(j);
    return s;
}

double SpectralField::norm() const { return std::sqrt(norm2()); }

int SpectralField::effective_degree(double tol) const {
    for (int j = L_; j >= 0; --j)
        for (int m = 0; m <= j; ++m)
            if (std::abs(c_[index(j, m)]) > tol) return j;
    return 0;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (o.L_ != L_) throw std::invalid_argument("SpectralField: truncation mismatch");
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (o.L_ != L_) throw std::invalid_argument("SpectralField: truncation mismatch");
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

double inner(const SpectralField& f, const SpectralField& g) {
    const int lmin = std::min(f.L(), g.L());
    double s = 0.0;
    for (int j = 0; j <= lmin; ++j) {
        s += (f(j, 0) * std::conj(g(j, 0))).real();
        for (int m = 1; m <= j; ++m) s += 2.0 * (f(j, m) * std::conj(g(j, m))).real();
    }
    return s;
}

// ---------------------------------------------------------------- Legendre

void legendre_all(int L, double mu, double s, double* out) {
    out[0] = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 1; m <= L; ++m)
        out[SpectralField::index(m, m)] =
            -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * out[SpectralField::index(m - 1, m - 1)];
    for (int m = 0; m < L; ++m)
        out[SpectralField::index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * mu * out[SpectralField::index(m, m)];
    for (int m = 0; m <= L; ++m) {
        for (int j = m + 2; j <= L; ++j) {
            const double jj = j, mm = m;
            const double a = std::sqrt((4.0 * jj * jj - 1.0) / (jj * jj - mm * mm));
            const double b = std::sqrt(((jj - 1.0) * (jj - 1.0) - mm * mm) / (4.0 * (jj - 1.0) * (jj - 1.0) - 1.0));
            out[SpectralField::index(j, m)] =
                a * (mu * out[SpectralField::index(j - 1, m)] - b * out[SpectralField::index(j - 2, m)]);
        }
    }
}

double assoc_legendre_normalized(int j, int m, double mu) {
    if (m < 0 || m > j) throw std::invalid_argument("assoc_legendre_normalized: requires 0 <= m <= j");
    if (mu < -1.0 || mu > 1.0) throw std::invalid_argument("assoc_legendre_normalized: mu outside [-1, 1]");
    const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    double pmm = 1.0 / std::sqrt(4.0 * kPi);
    for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
    if (j == m) return pmm;
    double p1 = std::sqrt(2.0 * m + 3.0) * mu * pmm;
    double p0 = pmm;
    for (int jj = m + 2; jj <= j; ++jj) {
        const double a = std::sqrt((4.0 * jj * jj - 1.0) / (double(jj) * jj - double(m) * m));
        const double b = std::sqrt((double(jj - 1) * (jj - 1) - double(m) * m) / (4.0 * (jj - 1.0) * (jj - 1.0) - 1.0));
        const double p2 = a * (mu * p1 - b * p0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// ---------------------------------------------------------------- Transform

Transform::Transform(GridPtr grid) : grid_(std::move(grid)) {
    const GridSpec& g = *grid_;
    const int L = g.L;
    nf_ = g.n_lon / 2 + 1;
    row_ = SpectralField::size_for(L);
    p_.assign(row_ * g.n_lat, 0.0);
    dp_.assign(row_ * g.n_lat, 0.0);
    for (int k = 0; k < g.n_lat; ++k) {
        const double mu = g.mu_nodes[k], s = g.cos_theta[k];
        double* P = &p_[k * row_];
        double* dP = &dp_[k * row_];
        legendre_all(L, mu, s, P);
        for (int m = 0; m <= L; ++m) {
            for (int j = m; j <= L; ++j) {
                double lower = 0.0;
                if (j > m) {
                    const double jj = j, mm = m;
                    lower = std::sqrt((2.0 * jj + 1.0) * (jj * jj - mm * mm) / (2.0 * jj - 1.0)) *
                            P[SpectralField::index(j - 1, m)];
                }
                dP[SpectralField::index(j, m)] = (-j * mu * P[SpectralField::index(j, m)] + lower) / s;
            }
        }
    }

    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    int n = g.n_lon;
    double* rbuf = fftw_alloc_real(static_cast<size_t>(g.n_lat) * g.n_lon);
    fftw_complex* cbuf = fftw_alloc_complex(static_cast<size_t>(g.n_lat) * nf_);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plan_c2r_ = fftw_plan_many_dft_c2r(1, &n, g.n_lat, cbuf, nullptr, 1, nf_, rbuf, nullptr, 1, g.n_lon, flags);
    plan_r2c_ = fftw_plan_many_dft_r2c(1, &n, g.n_lat, rbuf, nullptr, 1, g.n_lon, cbuf, nullptr, 1, nf_, flags);
    fftw_free(rbuf);
    fftw_free(cbuf);
    if (!plan_c2r_ || !plan_r2c_) throw std::runtime_error("Transform: FFTW planning failed");
}

Transform::~Transform() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (plan_c2r_) fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
    if (plan_r2c_) fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
}

void Transform::to_fourier(const SpectralField& c, Deriv d, cplx* F) const {
    const GridSpec& g = *grid_;
    const int Lc = c.L();
    if (Lc > g.L) throw std::invalid_argument("Transform: field degree exceeds grid truncation");
    for (int j = 0; j <= Lc; ++j) {
        const cplx v = c(j, 0);
        if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())))
            throw std::invalid_argument("Transform: order-0 coefficient is not real");
    }
    const std::vector<double>& tab = (d == Deriv::theta) ? dp_ : p_;
    const cplx* cd = c.data().data();
    for (int k = 0; k < g.n_lat; ++k) {
        const double* P = &tab[k * row_];
        cplx* Fk = F + static_cast<size_t>(k) * nf_;
        for (int m = 0; m <= Lc; ++m) {
            double re = 0.0, im = 0.0;
            for (int j = m; j <= Lc; ++j) {
                const size_t ix = SpectralField::index(j, m);
                re += cd[ix].real() * P[ix];
                im += cd[ix].imag() * P[ix];
            }
            Fk[m] = (d == Deriv::phi) ? cplx(-m * im, m * re) : cplx(re, im);
        }
        for (int m = Lc + 1; m < nf_; ++m) Fk[m] = 0.0;
    }
}

void Transform::fourier_to_grid(cplx* F, double* out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_), reinterpret_cast<fftw_complex*>(F), out);
}

void Transform::grid_to_fourier(const double* in, cplx* F) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_), const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(F));
    const double scale = 2.0 * kPi / grid_->n_lon;
    const size_t total = static_cast<size_t>(grid_->n_lat) * nf_;
    for (size_t i = 0; i < total; ++i) F[i] *= scale;
}

SpectralField Transform::from_fourier(const cplx* F, int L) const {
    const GridSpec& g = *grid_;
    if (L > g.L) throw std::invalid_argument("Transform: requested degree exceeds grid truncation");
    SpectralField c(L);
    cplx* cd = c.data().data();
    for (int k = 0; k < g.n_lat; ++k) {
        const double* P = &p_[k * row_];
        const cplx* Fk = F + static_cast<size_t>(k) * nf_;
        const double w = g.weights[k];
        for (int m = 0; m <= L; ++m) {
            const cplx wf = w * Fk[m];
            for (int j = m; j <= L; ++j) {
                const size_t ix = SpectralField::index(j, m);
                cd[ix] += wf * P[ix];
            }
        }
    }
    for (int j = 0; j <= L; ++j) c(j, 0) = c(j, 0).real();
    return c;
}

GridField Transform::synthesize(const SpectralField& c, Deriv d) const {
    GridField out(grid_);
    std::vector<cplx> F(static_cast<size_t>(grid_->n_lat) * nf_);
    to_fourier(c, d, F.data());
    fourier_to_grid(F.data(), out.values.data());
    return out;
}

SpectralField Transform::analyze(const GridField& f, int L) const {
    std::vector<cplx> F(static_cast<size_t>(grid_->n_lat) * nf_);
    grid_to_fourier(f.values.data(), F.data());
    return from_fourier(F.data(), L);
}

std::shared_ptr<const Transform> transform_for(const GridPtr& grid) {
    static std::mutex mtx;
    static std::map<std::tuple<int, int, int>, std::shared_ptr<const Transform>> cache;
    const auto key = std::make_tuple(grid->L, grid->n_lat, grid->n_lon);
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto t = std::make_shared<const Transform>(grid);
    std::lock_guard<std::mutex> lock(mtx);
    return cache.emplace(key, t).first->second;
}

SpectralField analyze(const GridField& f, int L) {
    const GridSpec& g = *f.spec;
    if (g.n_lat < L + 1 || g.n_lon < 2 * L + 1)
        throw std::invalid_argument("analyze: grid too small for degree " + std::to_string(L));
    if (L > g.L)
        throw std::invalid_argument("analyze: degree " + std::to_string(L) + " exceeds grid truncation " +
                                    std::to_string(g.L));
    return transform_for(f.spec)->analyze(f, L);
}

GridField synthesize(const SpectralField& c, const GridPtr& spec) {
    if (spec->L < c.L())
        throw std::invalid_argument("synthesize: grid truncation " + std::to_string(spec->L) +
                                    " below field degree " + std::to_string(c.L()));
    return transform_for(spec)->synthesize(c);
}

double eval_point(const SpectralField& c, double phi, double theta) {
    const int L = c.L();
    std::vector<double> P(SpectralField::size_for(L));
    legendre_all(L, std::sin(theta), std::abs(std::cos(theta)), P.data());
    double total = 0.0;
    for (int m = 0; m <= L; ++m) {
        cplx Fm = 0.0;
        for (int j = m; j <= L; ++j) Fm += c(j, m) * P[SpectralField::index(j, m)];
        if (m == 0)
            total += Fm.real();
        else
            total += 2.0 * (Fm * std::polar(1.0, m * phi)).real();
    }
    return total;
}

// ---------------------------------------------------------------- E2 basis

namespace {
const double kA = std::sqrt(16.0 * kPi / 5.0);  // 3 sin^2 - 1 = kA Y_2^0
const double kK1 = std::sqrt(15.0 / (8.0 * kPi));
const double kK2 = std::sqrt(15.0 / (32.0 * kPi));
}  // namespace

SpectralField e2_to_spectral(const E2Coeffs& y, int L) {
    if (L < 2) throw std::invalid_argument("e2_to_spectral: L must be >= 2");
    SpectralField c(L);
    c(2, 0) = y.a * kA;
    c(2, 1) = cplx(-y.b, y.c) / kK1;
    c(2, 2) = cplx(y.d, -y.e) / (2.0 * kK2);
    return c;
}

E2Coeffs e2_component(const SpectralField& c) {
    E2Coeffs y;
    if (c.L() < 2) return y;
    y.a = c(2, 0).real() / kA;
    y.b = -kK1 * c(2, 1).real();
    y.c = kK1 * c(2, 1).imag();
    y.d = 2.0 * kK2 * c(2, 2).real();
    y.e = -2.0 * kK2 * c(2, 2).imag();
    return y;
}

E2Coeffs spectral_to_e2(const SpectralField& c) {
    const double total = c.norm2();
    const double outside = total - c.degree_norm2(2);
    if (total > 0.0 && outside > 1e-10 * total)
        throw std::invalid_argument("spectral_to_e2: field has significant content outside degree 2");
    return e2_component(c);
}

void check_degree1_reality(const Degree1& y, double tol) {
    const double scale = std::max({1.0, std::abs(y.a), std::abs(y.b), std::abs(y.c)});
    if (std::abs(y.a.imag()) > tol * scale || std::abs(y.b + std::conj(y.c)) > tol * scale)
        throw std::invalid_argument("degree-1 coefficients violate b = -conj(c) or have complex a");
}

Degree1 degree1_component(const SpectralField& f) {
    Degree1 y;
    if (f.L() < 1) return y;
    y.a = f(1, 0);
    y.b = f(1, 1);
    y.c = f.coeff(1, -1);
    return y;
}

SpectralField degree1_to_spectral(const Degree1& y, int L) {
    check_degree1_reality(y);
    SpectralField f(L);
    f(1, 0) = y.a.real();
    f(1, 1) = y.b;
    return f;
}

// ---------------------------------------------------------------- text format

void write_spectral(std::ostream& os, const SpectralField& c) {
    os << "L " << c.L() << '\n';
    os << std::setprecision(17);
    for (int j = 0; j <= c.L(); ++j)
        for (int m = 0; m <= j; ++m) os << j << ' ' << m << ' ' << c(j, m).real() << ' ' << c(j, m).imag() << '\n';
}

SpectralField read_spectral(std::istream& is) {
    std::string tag;
    int L = -1;
    if (!(is >> tag >> L) || tag != "L" || L < 0) throw std::runtime_error("read_spectral: missing 'L <int>' header");
    SpectralField c(L);
    int j, m;
    double re, im;
    while (is >> j >> m >> re >> im) {
        if (j < 0 || j > L || m < 0 || m > j) throw std::runtime_error("read_spectral: index out of range");
        c(j, m) = cplx(re, im);
    }
    return c;
}

void save_spectral(const std::string& path, const SpectralField& c) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_spectral(os, c);
}

SpectralField load_spectral(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_spectral(is);
}

}  // namespace rhlab
