#include "iwsk/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace iwsk {

namespace {
void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double d) {
    std::uint64_t v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
    return v;
}

double get_f64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
    return std::bit_cast<double>(v);
}
}  // namespace

void write_snapshot(const std::string& path, const SpectralField& u) {
    const auto& g = *u.grid;
    std::string buf;
    buf.reserve(24 + static_cast<std::size_t>(g.n_modes()) * g.n_y() * 16);
    buf += "IWSK";
    put_u32(buf, 1u);
    put_u32(buf, static_cast<std::uint32_t>(g.n_modes()));
    put_u32(buf, static_cast<std::uint32_t>(g.n_y()));
    put_f64(buf, g.b());
    put_f64(buf, g.l_y());
    for (int n = 0; n < g.n_modes(); ++n)
        for (int k = 0; k < g.n_y(); ++k) {
            put_f64(buf, u.coeffs(n, k).real());
            put_f64(buf, u.coeffs(n, k).imag());
        }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("write_snapshot: cannot open " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw ConfigError("write_snapshot: short write to " + path);
}

SpectralField read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("read_snapshot: cannot open " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 32 || buf.compare(0, 4, "IWSK") != 0)
        throw ConfigError("read_snapshot: bad magic in " + path);
    const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
    const std::uint32_t version = get_u32(p + 4);
    if (version != 1) throw ConfigError("read_snapshot: unsupported version");
    const std::uint32_t nh = get_u32(p + 8);
    const std::uint32_t ny = get_u32(p + 12);
    const double b = get_f64(p + 16);
    const double ly = get_f64(p + 24);
    const std::size_t need = 32 + std::size_t(nh) * ny * 16;
    if (buf.size() != need) throw ConfigError("read_snapshot: truncated file " + path);

    SpectralField u(Grid::make(b, int(nh), int(ny), ly));
    std::size_t off = 32;
    for (std::uint32_t n = 0; n < nh; ++n)
        for (std::uint32_t k = 0; k < ny; ++k) {
            const double re = get_f64(p + off);
            const double im = get_f64(p + off + 8);
            u.coeffs(n, k) = cplx(re, im);
            off += 16;
        }
    return u;
}

}  // namespace iwsk
