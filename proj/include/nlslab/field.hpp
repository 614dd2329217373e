#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "nlslab/error.hpp"

namespace nlslab {

using cplx = std::complex<double>;

/// Radial field u(r) sampled on the uniform grid r_j = j * step, j = 0..n-1.
class FieldGrid {
public:
    FieldGrid() = default;

    FieldGrid(int N, std::vector<double> radii, std::vector<cplx> values)
        : N_(N), radii_(std::move(radii)), values_(std::move(values)) {
        validate();
    }

    int dimension() const { return N_; }
    std::size_t size() const { return radii_.size(); }
    double step() const { return step_; }
    double outer_radius() const { return radii_.back(); }
    const std::vector<double>& radii() const { return radii_; }
    const std::vector<cplx>& values() const { return values_; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    bool is_real(double tol = 0.0) const {
        for (const auto& v : values_) {
            if (std::abs(v.imag()) > tol) return false;
        }
        return true;
    }

    /// Every other sample, keeping r = 0.
    FieldGrid coarsened() const {
        std::vector<double> r;
        std::vector<cplx> v;
        for (std::size_t j = 0; j < size(); j += 2) {
            r.push_back(radii_[j]);
            v.push_back(values_[j]);
        }
        return FieldGrid(N_, std::move(r), std::move(v));
    }

private:
    void validate() {
        if (N_ < 1) throw MalformedInput("FieldGrid: dimension must be >= 1");
        if (radii_.size() != values_.size()) throw MalformedInput("FieldGrid: radii/values size mismatch");
        if (radii_.size() < 8) throw MalformedInput("FieldGrid: need at least 8 samples");
        if (radii_.front() != 0.0) throw MalformedInput("FieldGrid: radii must start at 0");
        step_ = radii_[1];
        if (!(step_ > 0.0)) throw MalformedInput("FieldGrid: radii must be strictly ascending");
        for (std::size_t j = 1; j < radii_.size(); ++j) {
            if (!(radii_[j] > radii_[j - 1])) throw MalformedInput("FieldGrid: radii must be strictly ascending");
            const double expect = step_ * static_cast<double>(j);
            if (std::abs(radii_[j] - expect) > 1e-9 * std::max(1.0, expect)) {
                throw MalformedInput("FieldGrid: radii must be uniformly spaced");
            }
        }
        for (const auto& v : values_) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw MalformedInput("FieldGrid: non-finite sample");
            }
        }
    }

    int N_ = 0;
    double step_ = 0.0;
    std::vector<double> radii_;
    std::vector<cplx> values_;
};

/// Samples f on `points` uniform radii covering [0, outer_radius].
template <class F>
FieldGrid sample_field(int N, double outer_radius, std::size_t points, F&& f) {
    std::vector<double> r(points);
    std::vector<cplx> v(points);
    const double h = outer_radius / static_cast<double>(points - 1);
    for (std::size_t j = 0; j < points; ++j) {
        r[j] = h * static_cast<double>(j);
        v[j] = f(r[j]);
    }
    return FieldGrid(N, std::move(r), std::move(v));
}

/// NLS scaling u -> λ^{2/(p-1)} u(λ x).
inline FieldGrid scale_field(const FieldGrid& field, double lambda, double p) {
    if (!(lambda > 0.0)) throw DomainError("scale_field: lambda must be positive");
    std::vector<double> r(field.radii());
    std::vector<cplx> v(field.values());
    const double amp = std::pow(lambda, 2.0 / (p - 1.0));
    for (auto& x : r) x /= lambda;
    for (auto& x : v) x *= amp;
    return FieldGrid(field.dimension(), std::move(r), std::move(v));
}

/// Multiplies the field by e^{iγ r^2}.
inline FieldGrid apply_quadratic_phase(const FieldGrid& field, double gamma) {
    std::vector<cplx> v(field.values());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double r = field.radii()[j];
        v[j] *= std::polar(1.0, gamma * r * r);
    }
    return FieldGrid(field.dimension(), field.radii(), std::move(v));
}

/// Reads the `r,re,im` CSV format.
inline FieldGrid read_field_csv(std::istream& in, int N) {
    std::string line;
    if (!std::getline(in, line)) throw MalformedInput("grid CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "r,re,im") throw MalformedInput("grid CSV: expected header 'r,re,im'");
    std::vector<double> r;
    std::vector<cplx> v;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::istringstream ss(line);
        double a, b, c;
        char c1 = 0, c2 = 0;
        if (!(ss >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',') {
            throw MalformedInput("grid CSV: cannot parse line " + std::to_string(lineno));
        }
        r.push_back(a);
        v.emplace_back(b, c);
    }
    return FieldGrid(N, std::move(r), std::move(v));
}

inline FieldGrid read_field_csv(const std::string& path, int N) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("grid CSV: cannot open " + path);
    return read_field_csv(in, N);
}

inline void write_field_csv(std::ostream& out, const FieldGrid& field) {
    out << "r,re,im\n" << std::setprecision(17);
    for (std::size_t j = 0; j < field.size(); ++j) {
        out << field.radii()[j] << ',' << field.values()[j].real() << ',' << field.values()[j].imag() << '\n';
    }
}

}  // namespace nlslab
