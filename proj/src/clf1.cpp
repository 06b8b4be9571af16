#include "clab/clf1.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "clab/error.hpp"

namespace clab {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

void put_f64(std::ostream& os, double v) {
    std::uint64_t u = std::bit_cast<std::uint64_t>(v);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xff);
    os.write(b, 8);
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw ValidationError("CLF1: truncated coefficient data");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(u);
}

} // namespace

void write_clf1(std::ostream& os, const Field& f) {
    const Grid& g = f.grid();
    char hdr[160];
    std::snprintf(hdr, sizeof hdr, "CLF1 %d %d %.17g %d %d\n", g.dim(), g.n(), g.box(),
                  static_cast<int>(f.rank()), f.ncomp());
    os << hdr;
    for (const auto& c : f.data()) {
        put_f64(os, c.real());
        put_f64(os, c.imag());
    }
    if (!os) throw std::runtime_error("CLF1: write failed");
}

Field read_clf1(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("CLF1: missing header");
    std::istringstream h(line);
    std::string magic;
    int dim = 0, n = 0, rank = -1, ncomp = 0;
    double L = 0;
    h >> magic >> dim >> n >> L >> rank >> ncomp;
    if (!h || magic != "CLF1") throw ValidationError("CLF1: malformed header: " + line);
    require(rank >= 0 && rank <= 2, "CLF1: rank must be 0, 1 or 2");
    Grid g = make_grid(dim, n, L);
    Field f(g, static_cast<Rank>(rank));
    require(f.ncomp() == ncomp, "CLF1: component count does not match rank");
    for (auto& c : f.data()) {
        double re = get_f64(is);
        double im = get_f64(is);
        c = cplx(re, im);
    }
    return f;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ValidationError("cannot write " + tmp);
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void save_clf1(const std::string& path, const Field& f) {
    std::ostringstream os(std::ios::binary);
    write_clf1(os, f);
    write_file_atomic(path, os.str());
}

Field load_clf1(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open " + path);
    return read_clf1(is);
}

} // namespace clab
