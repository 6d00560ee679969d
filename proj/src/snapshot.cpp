#include "rept/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; add byte swapping for this platform");

namespace rept {

void write_snapshot(const std::string& path, const std::string& header,
                    const std::vector<double>& data) {
    if (header.find('\n') != std::string::npos)
        throw std::invalid_argument("snapshot header must be a single line");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("snapshot: cannot open " + path);
    out << header << '\n';
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!out) throw std::runtime_error("snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("snapshot: cannot open " + path);
    Snapshot s;
    if (!std::getline(in, s.header))
        throw std::runtime_error("snapshot: missing header in " + path);
    std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
    if (raw.size() % sizeof(double) != 0)
        throw std::runtime_error("snapshot: payload size not a multiple of 8 in " + path);
    s.data.resize(raw.size() / sizeof(double));
    std::memcpy(s.data.data(), raw.data(), raw.size());
    return s;
}

void write_kernel_snapshot(const std::string& path, const KernelField& k) {
    std::ostringstream h;
    h.precision(17);
    h << "rept kernel dims " << k.n_t << ' ' << k.n << ' ' << k.n << ' ' << k.n_s
      << " dT " << k.dT << " ds " << k.ds();
    write_snapshot(path, h.str(), k.v);
}

void write_deformation_snapshot(const std::string& path, const DeformationField& g) {
    std::ostringstream h;
    h.precision(17);
    h << "rept deformation dims " << g.n_t << ' ' << g.n << ' ' << g.n << " 4 dT " << g.dT;
    write_snapshot(path, h.str(), g.v);
}

void write_stress_snapshot(const std::string& path, const Tensor2Field& sigma) {
    std::ostringstream h;
    h << "rept stress dims " << sigma.n << ' ' << sigma.n << " 4";
    std::vector<double> data;
    data.reserve(sigma.xx.size() * 4);
    data.insert(data.end(), sigma.xx.begin(), sigma.xx.end());
    data.insert(data.end(), sigma.xy.begin(), sigma.xy.end());
    data.insert(data.end(), sigma.yx.begin(), sigma.yx.end());
    data.insert(data.end(), sigma.yy.begin(), sigma.yy.end());
    write_snapshot(path, h.str(), data);
}

void write_velocity_snapshot(const std::string& path, const VectorField& v) {
    std::ostringstream h;
    h << "rept velocity dims " << v.n << ' ' << v.n << " 2";
    std::vector<double> data;
    data.reserve(v.x.size() * 2);
    data.insert(data.end(), v.x.begin(), v.x.end());
    data.insert(data.end(), v.y.begin(), v.y.end());
    write_snapshot(path, h.str(), data);
}

}  // namespace rept
