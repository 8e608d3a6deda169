#include "fedroute/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "checkpoint container assumes a little-endian host");

namespace fedroute {

namespace {

constexpr char kMagic[9] = "FRCHKPT1";
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_str(std::ostream& os, const std::string& s) {
    put_u32(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

double get_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

std::string get_str(std::istream& is) {
    const std::uint32_t len = get_u32(is);
    if (len > (1u << 20)) throw std::runtime_error("checkpoint: corrupt string");
    std::string s(len, '\0');
    is.read(s.data(), static_cast<std::streamsize>(len));
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    return s;
}

}  // namespace

void save_checkpoint(const ParamVector& params,
                     const std::map<std::string, std::string>& meta,
                     const std::string& path) {
    if (!params.layout || params.data.size() != params.layout->total_len)
        throw std::invalid_argument("save_checkpoint: inconsistent ParamVector");

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_checkpoint: cannot open " + path);
    os.write(kMagic, 8);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(params.arch.embed_dim));
    put_u32(os, static_cast<std::uint32_t>(params.arch.heads));
    put_u32(os, static_cast<std::uint32_t>(params.arch.layers));
    put_f64(os, params.arch.clip);
    put_u32(os, static_cast<std::uint32_t>(meta.size()));
    for (const auto& [k, v] : meta) {
        put_str(os, k);
        put_str(os, v);
    }
    put_u32(os, static_cast<std::uint32_t>(params.layout->entries.size()));
    for (const auto& e : params.layout->entries) {
        put_str(os, e.name);
        put_u32(os, static_cast<std::uint32_t>(e.shape.size()));
        for (std::size_t s : e.shape) put_u64(os, s);
    }
    put_u64(os, params.layout->total_len);
    os.write(reinterpret_cast<const char*>(params.data.data()),
             static_cast<std::streamsize>(params.data.size() * sizeof(double)));
    if (!os) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_checkpoint: cannot open " + path);

    char magic[8] = {};
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("load_checkpoint: bad magic in " + path);
    if (get_u32(is) != kVersion)
        throw std::runtime_error("load_checkpoint: unsupported version in " + path);

    LoadedCheckpoint out;
    out.params.arch.embed_dim = static_cast<int>(get_u32(is));
    out.params.arch.heads = static_cast<int>(get_u32(is));
    out.params.arch.layers = static_cast<int>(get_u32(is));
    out.params.arch.clip = get_f64(is);
    out.params.arch.validate();

    const std::uint32_t meta_count = get_u32(is);
    for (std::uint32_t i = 0; i < meta_count; ++i) {
        std::string k = get_str(is);
        out.meta[std::move(k)] = get_str(is);
    }

    auto layout = make_layout(out.params.arch);
    const std::uint32_t ntensors = get_u32(is);
    if (ntensors != layout->entries.size())
        throw std::runtime_error("load_checkpoint: layout mismatch in " + path);
    for (const auto& expected : layout->entries) {
        if (get_str(is) != expected.name)
            throw std::runtime_error("load_checkpoint: layout mismatch in " + path);
        const std::uint32_t ndims = get_u32(is);
        if (ndims != expected.shape.size())
            throw std::runtime_error("load_checkpoint: layout mismatch in " + path);
        for (std::size_t dim : expected.shape) {
            if (get_u64(is) != dim)
                throw std::runtime_error("load_checkpoint: layout mismatch in " + path);
        }
    }
    const std::uint64_t total = get_u64(is);
    if (total != layout->total_len)
        throw std::runtime_error("load_checkpoint: layout mismatch in " + path);

    out.params.layout = layout;
    out.params.data.resize(total);
    is.read(reinterpret_cast<char*>(out.params.data.data()),
            static_cast<std::streamsize>(total * sizeof(double)));
    if (!is) throw std::runtime_error("load_checkpoint: truncated file " + path);
    return out;
}

}  // namespace fedroute
