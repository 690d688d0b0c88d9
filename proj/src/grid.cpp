#include "lspde/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fft.hpp"
#include "lspde/errors.hpp"
#include "lspde/text.hpp"

namespace lspde {

Grid::Grid(std::vector<int> shape, std::vector<double> box) : shape_(std::move(shape)), box_(std::move(box))
{
    if (shape_.empty() || shape_.size() > 3) throw InvalidArgument("grid dimension must be 1, 2 or 3");
    if (box_.size() != shape_.size()) throw DimensionMismatch("grid: shape and box lengths differ in rank");
    size_ = 1;
    cell_volume_ = 1.0;
    for (std::size_t j = 0; j < shape_.size(); ++j) {
        const int n = shape_[j];
        if (n < 4 || !std::has_single_bit(static_cast<unsigned>(n))) {
            throw InvalidArgument("grid: point counts must be powers of two >= 4");
        }
        if (!(std::isfinite(box_[j]) && box_[j] > 0.0)) throw InvalidArgument("grid: box lengths must be > 0");
        size_ *= static_cast<std::size_t>(n);
        const double h = box_[j] / n;
        cell_volume_ *= h;
        std::vector<double> x(n);
        std::vector<double> xi(n);
        for (int i = 0; i < n; ++i) {
            x[i] = -0.5 * box_[j] + i * h;
            xi[i] = 2.0 * std::numbers::pi * signed_index(i, n) / box_[j];
        }
        coords_.push_back(std::move(x));
        freqs_.push_back(std::move(xi));
    }
}

Grid Grid::cube(int dim, int n, double length)
{
    return Grid(std::vector<int>(dim, n), std::vector<double>(dim, length));
}

double Grid::box_volume() const
{
    double v = 1.0;
    for (double l : box_) v *= l;
    return v;
}

double Grid::frequency_cell_volume() const
{
    double v = 1.0;
    for (double l : box_) v *= 2.0 * std::numbers::pi / l;
    return v;
}

void Grid::unravel(std::size_t flat, int* idx) const
{
    for (int j = dim() - 1; j >= 0; --j) {
        idx[j] = static_cast<int>(flat % static_cast<std::size_t>(shape_[j]));
        flat /= static_cast<std::size_t>(shape_[j]);
    }
}

std::size_t Grid::ravel(const int* idx) const
{
    std::size_t flat = 0;
    for (int j = 0; j < dim(); ++j) {
        const int n = shape_[j];
        const int i = ((idx[j] % n) + n) % n;
        flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
    }
    return flat;
}

std::vector<double> Grid::coordinate(std::size_t flat) const
{
    int idx[3];
    unravel(flat, idx);
    std::vector<double> x(dim());
    for (int j = 0; j < dim(); ++j) x[j] = coords_[j][idx[j]];
    return x;
}

std::vector<double> Grid::frequency(std::size_t flat) const
{
    int idx[3];
    unravel(flat, idx);
    std::vector<double> xi(dim());
    for (int j = 0; j < dim(); ++j) xi[j] = freqs_[j][idx[j]];
    return xi;
}

double Grid::frequency_norm(std::size_t flat) const
{
    int idx[3];
    unravel(flat, idx);
    double s = 0.0;
    for (int j = 0; j < dim(); ++j) s += freqs_[j][idx[j]] * freqs_[j][idx[j]];
    return std::sqrt(s);
}

double Grid::nyquist_radius() const
{
    double r = HUGE_VAL;
    for (int j = 0; j < dim(); ++j) r = std::min(r, std::numbers::pi / spacing(j));
    return r;
}

double Grid::max_frequency_norm() const
{
    double s = 0.0;
    for (int j = 0; j < dim(); ++j) {
        const double k = std::numbers::pi / spacing(j);
        s += k * k;
    }
    return std::sqrt(s);
}

const char* to_string(Domain d)
{
    return d == Domain::physical ? "physical" : "spectral";
}

Field::Field(Grid grid, Domain domain) : grid_(std::move(grid)), domain_(domain)
{
    values_.assign(grid_.size(), cplx{});
}

Field::Field(Grid grid, std::vector<cplx> values, Domain domain)
    : grid_(std::move(grid)), values_(std::move(values)), domain_(domain)
{
    if (values_.size() != grid_.size()) throw ShapeMismatch("field: value count does not match grid");
}

Field Field::from_function(const Grid& grid, const std::function<cplx(std::span<const double>)>& f)
{
    Field out(grid, Domain::physical);
    std::vector<double> x(grid.dim());
    int idx[3];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.unravel(i, idx);
        for (int j = 0; j < grid.dim(); ++j) x[j] = grid.axis_coordinates(j)[idx[j]];
        out.values_[i] = f(x);
    }
    return out;
}

Field Field::from_real(const Grid& grid, std::span<const double> values)
{
    if (values.size() != grid.size()) throw ShapeMismatch("field: value count does not match grid");
    Field out(grid, Domain::physical);
    std::transform(values.begin(), values.end(), out.values_.begin(), [](double v) { return cplx(v, 0.0); });
    return out;
}

double Field::max_abs() const
{
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

double Field::max_abs_imag() const
{
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v.imag()));
    return m;
}

std::vector<double> Field::real_part() const
{
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), [](const cplx& v) { return v.real(); });
    return out;
}

void Field::check_compatible(const Field& o) const
{
    if (!(grid_ == o.grid_)) throw ShapeMismatch("field arithmetic on different grids");
    if (domain_ != o.domain_) throw DomainTagMismatch("field arithmetic across domains");
}

Field& Field::operator+=(const Field& o)
{
    check_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& o)
{
    check_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

Field& Field::operator*=(cplx s)
{
    for (auto& v : values_) v *= s;
    return *this;
}

Field Field::shifted(std::span<const int> shift) const
{
    if (static_cast<int>(shift.size()) != grid_.dim()) throw DimensionMismatch("shift rank differs from grid");
    Field out(grid_, domain_);
    int idx[3];
    for (std::size_t i = 0; i < values_.size(); ++i) {
        grid_.unravel(i, idx);
        for (int j = 0; j < grid_.dim(); ++j) idx[j] += shift[j];
        out.values_[i] = values_[grid_.ravel(idx)];
    }
    return out;
}

namespace {

// prod_j (-1)^{k_j}: the phase e^{i xi L/2} from the box offset -L/2 (n_j even).
double offset_sign(const Grid& g, std::size_t flat)
{
    int idx[3];
    g.unravel(flat, idx);
    int parity = 0;
    for (int j = 0; j < g.dim(); ++j) parity += idx[j];
    return (parity % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

Field dft(const Field& f)
{
    if (f.domain() != Domain::physical) throw DomainTagMismatch("dft expects a physical field");
    const Grid& g = f.grid();
    std::vector<cplx> data = f.values();
    fft::transform(data, g.shape(), -1);
    const double h = g.cell_volume();
    for (std::size_t k = 0; k < data.size(); ++k) data[k] *= h * offset_sign(g, k);
    return Field(g, std::move(data), Domain::spectral);
}

Field idft(const Field& f)
{
    if (f.domain() != Domain::spectral) throw DomainTagMismatch("idft expects a spectral field");
    const Grid& g = f.grid();
    std::vector<cplx> data = f.values();
    for (std::size_t k = 0; k < data.size(); ++k) data[k] *= offset_sign(g, k);
    fft::transform(data, g.shape(), +1);
    const double inv = 1.0 / g.box_volume();
    for (auto& v : data) v *= inv;
    return Field(g, std::move(data), Domain::physical);
}

namespace detail {

double weighted_lr_formula(const Field& f, double r, double rho)
{
    if (f.domain() != Domain::physical) throw DomainTagMismatch("weighted norm expects a physical field");
    if (!(r > 0.0)) throw InvalidR("r must be > 0");
    const Grid& g = f.grid();
    int idx[3];
    auto weight = [&](std::size_t i) {
        if (rho == 0.0) return 1.0;
        g.unravel(i, idx);
        double s = 1.0;
        for (int j = 0; j < g.dim(); ++j) {
            const double x = g.axis_coordinates(j)[idx[j]];
            s += x * x;
        }
        return std::pow(s, 0.5 * rho);
    };
    if (std::isinf(r)) {
        double m = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, weight(i) * std::abs(f[i]));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = weight(i) * std::abs(f[i]);
        s += r == 2.0 ? a * a : std::pow(a, r);
    }
    s *= g.cell_volume();
    return r == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / r);
}

}  // namespace detail

double weighted_lr_norm(const Field& f, double r, double rho)
{
    if (!(r >= 1.0)) throw InvalidR("weighted_lr_norm: r must lie in [1, inf]");
    return detail::weighted_lr_formula(f, r, rho);
}

double spectral_l2_norm(const Field& f)
{
    if (f.domain() != Domain::spectral) throw DomainTagMismatch("spectral_l2_norm expects a spectral field");
    double s = 0.0;
    for (const auto& v : f.values()) s += std::norm(v);
    return std::sqrt(s * f.grid().frequency_cell_volume());
}

// --- file format v1 ---------------------------------------------------------

namespace {

constexpr const char* kMagic = "LSPDE-FIELD 1";

void put_le(std::ostream& os, double v)
{
    auto bits = std::bit_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffu);
    os.write(reinterpret_cast<const char*>(b), 8);
}

double get_ordered(const unsigned char* b, bool little)
{
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        const unsigned char byte = little ? b[i] : b[7 - i];
        bits |= static_cast<std::uint64_t>(byte) << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

std::vector<std::string> split_ws(const std::string& line)
{
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) out.push_back(tok);
    return out;
}

}  // namespace

void write_field(const Field& f, std::ostream& os, const std::vector<std::string>& extra_lines)
{
    const Grid& g = f.grid();
    std::string header = std::string(kMagic) + "\n";
    header += "dim " + std::to_string(g.dim()) + "\n";
    header += "shape";
    for (int n : g.shape()) header += " " + std::to_string(n);
    header += "\nbox";
    for (double l : g.box()) header += " " + format_real(l);
    header += std::string("\ndomain ") + to_string(f.domain()) + "\n";
    header += "dtype c128-le\n";
    for (const auto& line : extra_lines) {
        if (line.empty() || line.find('\n') != std::string::npos) {
            throw InvalidArgument("field header extension lines must be nonempty single lines");
        }
        header += line + "\n";
    }
    header += "\n";
    os.write(header.data(), static_cast<std::streamsize>(header.size()));
    for (const auto& v : f.values()) {
        put_le(os, v.real());
        put_le(os, v.imag());
    }
}

void write_field(const Field& f, const std::filesystem::path& path, const std::vector<std::string>& extra_lines)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_field(f, os, extra_lines);
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

Field read_field(std::istream& is, std::vector<std::string>* extra_lines)
{
    auto next_line = [&is](const char* what) {
        std::string line;
        if (!std::getline(is, line)) throw MalformedHeader(std::string("field header truncated before ") + what);
        return line;
    };
    if (next_line("magic") != kMagic) throw MalformedHeader("not an LSPDE-FIELD 1 file");

    auto toks = split_ws(next_line("dim"));
    if (toks.size() != 2 || toks[0] != "dim") throw MalformedHeader("expected 'dim <d>'");
    const auto dim_v = parse_real(toks[1]);
    if (!dim_v || *dim_v < 1 || *dim_v > 3 || *dim_v != std::floor(*dim_v)) throw MalformedHeader("bad dim");
    const auto d = static_cast<std::size_t>(*dim_v);

    toks = split_ws(next_line("shape"));
    if (toks.empty() || toks[0] != "shape") throw MalformedHeader("expected 'shape ...'");
    if (toks.size() != d + 1) throw ShapeMismatch("shape rank does not match dim");
    std::vector<int> shape;
    for (std::size_t j = 1; j < toks.size(); ++j) {
        const auto v = parse_real(toks[j]);
        if (!v || *v != std::floor(*v) || *v < 1 || *v > (1 << 26)) throw MalformedHeader("bad shape entry");
        shape.push_back(static_cast<int>(*v));
    }

    toks = split_ws(next_line("box"));
    if (toks.empty() || toks[0] != "box") throw MalformedHeader("expected 'box ...'");
    if (toks.size() != d + 1) throw ShapeMismatch("box rank does not match dim");
    std::vector<double> box;
    for (std::size_t j = 1; j < toks.size(); ++j) {
        const auto v = parse_real(toks[j]);
        if (!v) throw MalformedHeader("bad box entry");
        box.push_back(*v);
    }

    toks = split_ws(next_line("domain"));
    if (toks.size() != 2 || toks[0] != "domain" || (toks[1] != "physical" && toks[1] != "spectral")) {
        throw MalformedHeader("expected 'domain physical|spectral'");
    }
    const Domain domain = toks[1] == "physical" ? Domain::physical : Domain::spectral;

    toks = split_ws(next_line("dtype"));
    if (toks.size() != 2 || toks[0] != "dtype" || (toks[1] != "c128-le" && toks[1] != "c128-be")) {
        throw MalformedHeader("expected 'dtype c128-le'");
    }
    const bool little = toks[1] == "c128-le";

    for (;;) {
        std::string line = next_line("blank separator");
        if (line.empty()) break;
        if (extra_lines) extra_lines->push_back(std::move(line));
    }

    Grid grid;
    try {
        grid = Grid(shape, box);
    } catch (const std::invalid_argument& e) {
        throw MalformedHeader(std::string("invalid grid in header: ") + e.what());
    }
    std::vector<cplx> values(grid.size());
    unsigned char buf[16];
    for (auto& v : values) {
        if (!is.read(reinterpret_cast<char*>(buf), 16)) throw ShapeMismatch("field data shorter than shape");
        v = cplx(get_ordered(buf, little), get_ordered(buf + 8, little));
    }
    if (is.peek() != std::char_traits<char>::eof()) throw ShapeMismatch("field data longer than shape");
    return Field(std::move(grid), std::move(values), domain);
}

Field read_field(const std::filesystem::path& path, std::vector<std::string>* extra_lines)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return read_field(is, extra_lines);
}

void write_field_csv(const Field& f, std::ostream& os)
{
    const Grid& g = f.grid();
    const bool spectral = f.domain() == Domain::spectral;
    for (int j = 0; j < g.dim(); ++j) os << (spectral ? "xi" : "x") << (j + 1) << ",";
    os << "re,im\n";
    int idx[3];
    for (std::size_t i = 0; i < f.size(); ++i) {
        g.unravel(i, idx);
        for (int j = 0; j < g.dim(); ++j) {
            const auto& axis = spectral ? g.axis_frequencies(j) : g.axis_coordinates(j);
            os << format_real(axis[idx[j]]) << ",";
        }
        os << format_real(f[i].real()) << "," << format_real(f[i].imag()) << "\n";
    }
}

}  // namespace lspde
