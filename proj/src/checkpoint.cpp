#include "rarita/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

namespace rarita {

namespace {

void put_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = (v >> (8 * i)) & 0xff;
    os.write(reinterpret_cast<char*>(b), 4);
}

void put_f64(std::ostream& os, double v) {
    uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (u >> (8 * i)) & 0xff;
    os.write(reinterpret_cast<char*>(b), 8);
}

uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= uint64_t(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

void write_header(std::ostream& os, uint32_t kind, const LatticeGeometry& g) {
    os.write(kCheckpointMagic, 8);
    put_u32(os, kCheckpointVersion);
    put_u32(os, kind);
    put_u32(os, static_cast<uint32_t>(g.n));
    put_u32(os, 0);
    put_f64(os, g.h);
}

LatticeGeometry read_header(std::istream& is, const std::string& path, uint32_t expect_kind) {
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kCheckpointMagic, 8) != 0)
        throw std::runtime_error("checkpoint " + path + ": bad magic");
    uint32_t version = get_u32(is);
    if (version != kCheckpointVersion)
        throw std::runtime_error("checkpoint " + path + ": unsupported version");
    uint32_t kind = get_u32(is);
    if (kind != expect_kind) throw std::runtime_error("checkpoint " + path + ": wrong field kind");
    uint32_t n = get_u32(is);
    get_u32(is);  // reserved
    double h = get_f64(is);
    return {static_cast<int>(n), h};
}

void write_sidecar(const std::string& path, uint32_t kind, const LatticeGeometry& g,
                   const std::map<std::string, std::string>& meta) {
    nlohmann::json j;
    j["format"] = "rarita-kit-checkpoint";
    j["version"] = kCheckpointVersion;
    j["kind"] = (kind == kKindSpinorField) ? "spinor_hom_field" : "u1_connection";
    j["n"] = g.n;
    j["h"] = g.h;
    j["byte_order"] = "little-endian";
    for (const auto& [k, v] : meta) j["meta"][k] = v;
    std::ofstream os(path + ".meta.json");
    if (!os) throw std::runtime_error("cannot write sidecar for " + path);
    os << j.dump(2) << "\n";
}

}  // namespace

void write_checkpoint(const std::string& path, const SpinorHomField& f,
                      const std::map<std::string, std::string>& meta) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write checkpoint " + path);
    write_header(os, kKindSpinorField, f.geom);
    for (const auto& s : f.v)
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 3; ++c) {
                put_f64(os, s.m[r][c].real());
                put_f64(os, s.m[r][c].imag());
            }
    if (!os) throw std::runtime_error("short write on checkpoint " + path);
    write_sidecar(path, kKindSpinorField, f.geom, meta);
}

void write_checkpoint(const std::string& path, const U1Connection& A,
                      const std::map<std::string, std::string>& meta) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write checkpoint " + path);
    write_header(os, kKindConnection, A.geom);
    for (const auto& site : A.a)
        for (int k = 0; k < 3; ++k) put_f64(os, site[k]);
    if (!os) throw std::runtime_error("short write on checkpoint " + path);
    write_sidecar(path, kKindConnection, A.geom, meta);
}

SpinorHomField read_spinor_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read checkpoint " + path);
    LatticeGeometry g = read_header(is, path, kKindSpinorField);
    check_geometry(g);
    SpinorHomField f(g);
    for (auto& s : f.v)
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 3; ++c) {
                double re = get_f64(is), im = get_f64(is);
                s.m[r][c] = cx{re, im};
            }
    if (!is) throw std::runtime_error("checkpoint " + path + ": truncated payload");
    return f;
}

U1Connection read_connection_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read checkpoint " + path);
    LatticeGeometry g = read_header(is, path, kKindConnection);
    check_geometry(g);
    U1Connection A(g);
    for (auto& site : A.a)
        for (int k = 0; k < 3; ++k) site[k] = get_f64(is);
    if (!is) throw std::runtime_error("checkpoint " + path + ": truncated payload");
    return A;
}

std::map<std::string, std::string> read_checkpoint_meta(const std::string& path) {
    std::ifstream is(path + ".meta.json");
    if (!is) throw std::runtime_error("cannot read sidecar for " + path);
    nlohmann::json j = nlohmann::json::parse(is);
    std::map<std::string, std::string> out;
    if (j.contains("meta"))
        for (auto& [k, v] : j["meta"].items()) out[k] = v.get<std::string>();
    return out;
}

}  // namespace rarita
