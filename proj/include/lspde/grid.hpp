#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lspde {

using cplx = std::complex<double>;

// Periodic uniform lattice on the box prod_j [-L_j/2, L_j/2), 1 <= d <= 3.
// Sample i along axis j sits at x = -L_j/2 + i*h_j; spectral index k along
// axis j stands for the frequency 2*pi*k'/L_j with k' in [-n_j/2, n_j/2).
class Grid {
public:
    Grid() = default;
    Grid(std::vector<int> shape, std::vector<double> box);

    // Same point count and length on every axis.
    static Grid cube(int dim, int n, double length);

    int dim() const { return static_cast<int>(shape_.size()); }
    const std::vector<int>& shape() const { return shape_; }
    const std::vector<double>& box() const { return box_; }
    std::size_t size() const { return size_; }
    double spacing(int axis) const { return box_[axis] / shape_[axis]; }
    double cell_volume() const { return cell_volume_; }
    double box_volume() const;
    // Spectral cell volume prod_j 2*pi/L_j.
    double frequency_cell_volume() const;

    const std::vector<double>& axis_coordinates(int axis) const { return coords_[axis]; }
    const std::vector<double>& axis_frequencies(int axis) const { return freqs_[axis]; }
    static int signed_index(int k, int n) { return k < n / 2 ? k : k - n; }

    // Multi-index of a row-major flat index.
    void unravel(std::size_t flat, int* idx) const;
    std::size_t ravel(const int* idx) const;

    std::vector<double> coordinate(std::size_t flat) const;
    std::vector<double> frequency(std::size_t flat) const;
    double frequency_norm(std::size_t flat) const;

    // min_j pi/h_j: largest radius fully resolved along every axis.
    double nyquist_radius() const;
    // Largest |xi| on the lattice.
    double max_frequency_norm() const;

    bool operator==(const Grid& o) const { return shape_ == o.shape_ && box_ == o.box_; }

private:
    std::vector<int> shape_;
    std::vector<double> box_;
    std::size_t size_ = 0;
    double cell_volume_ = 0.0;
    std::vector<std::vector<double>> coords_;
    std::vector<std::vector<double>> freqs_;
};

enum class Domain { physical, spectral };

const char* to_string(Domain d);

class Field {
public:
    Field() = default;
    Field(Grid grid, Domain domain);
    Field(Grid grid, std::vector<cplx> values, Domain domain);

    static Field from_function(const Grid& grid, const std::function<cplx(std::span<const double>)>& f);
    static Field from_real(const Grid& grid, std::span<const double> values);

    const Grid& grid() const { return grid_; }
    Domain domain() const { return domain_; }
    std::size_t size() const { return values_.size(); }
    std::vector<cplx>& values() { return values_; }
    const std::vector<cplx>& values() const { return values_; }
    cplx& operator[](std::size_t i) { return values_[i]; }
    const cplx& operator[](std::size_t i) const { return values_[i]; }

    double max_abs() const;
    double max_abs_imag() const;
    std::vector<double> real_part() const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(cplx s);
    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(cplx s, Field a) { return a *= s; }

    // Lattice translation: result(x) = this(x + shift * h).
    Field shifted(std::span<const int> shift) const;

private:
    void check_compatible(const Field& o) const;

    Grid grid_;
    std::vector<cplx> values_;
    Domain domain_ = Domain::physical;
};

// Continuum-normalized transforms:  F f(xi) ~ h^d sum_x e^{-i xi.x} f(x),
// inverse  f(x) ~ (2 pi)^{-d} dxi^d sum_xi e^{i xi.x} F(xi).
Field dft(const Field& f);
Field idft(const Field& f);

// (sum <x>^{r rho} |f|^r h^d)^{1/r}, r in [1, inf]; r = inf is the weighted max.
double weighted_lr_norm(const Field& f, double r, double rho);

namespace detail {
// Formula-level version accepting any r > 0 (quasi-norms for r < 1).
double weighted_lr_formula(const Field& f, double r, double rho);
}

// (sum |F|^2 dxi^d)^{1/2} of a spectral field.
double spectral_l2_norm(const Field& f);

// Field file format v1.
void write_field(const Field& f, const std::filesystem::path& path,
                 const std::vector<std::string>& extra_lines = {});
// Header lines other than the six standard ones are returned through extra_lines.
Field read_field(const std::filesystem::path& path, std::vector<std::string>* extra_lines = nullptr);
// extra_lines are appended to the header before the terminating blank line.
void write_field(const Field& f, std::ostream& os, const std::vector<std::string>& extra_lines = {});
Field read_field(std::istream& is, std::vector<std::string>* extra_lines = nullptr);

// One row per cell: x_1..x_d, re, im.
void write_field_csv(const Field& f, std::ostream& os);

}  // namespace lspde
