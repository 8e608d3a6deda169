#include "fedroute/dataset_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "dataset container assumes a little-endian host");

namespace fedroute {

namespace {

constexpr char kMagic[9] = "FRVRPDS1";
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& os, const double* data, std::size_t count) {
    os.write(reinterpret_cast<const char*>(data),
             static_cast<std::streamsize>(count * sizeof(double)));
}

std::uint32_t get_u32(std::istream& is, const char* what) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error(std::string("dataset: truncated ") + what);
    return v;
}

void get_f64(std::istream& is, double* data, std::size_t count, const char* what) {
    is.read(reinterpret_cast<char*>(data),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!is) throw std::runtime_error(std::string("dataset: truncated ") + what);
}

}  // namespace

void write_dataset(const std::string& path, const std::vector<Instance>& instances) {
    if (instances.empty())
        throw std::invalid_argument("write_dataset: empty instance list");
    const VariantSpec spec = instances.front().spec;
    const int n = instances.front().n();
    for (const auto& inst : instances) {
        if (inst.spec != spec || inst.n() != n)
            throw std::invalid_argument(
                "write_dataset: mixed variants or sizes in one file");
    }

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_dataset: cannot open " + path);
    os.write(kMagic, 8);
    put_u32(os, kVersion);
    put_u32(os, spec.flags());
    put_u32(os, static_cast<std::uint32_t>(n));
    put_u32(os, static_cast<std::uint32_t>(instances.size()));
    for (const auto& inst : instances) {
        put_f64(os, inst.depot.data(), 2);
        put_f64(os, &inst.coords[0][0], static_cast<std::size_t>(2 * n));
        put_f64(os, inst.demands.data(), static_cast<std::size_t>(n));
        if (spec.duration_limit) {
            const double limit = *inst.duration_limit;
            put_f64(os, &limit, 1);
        }
        if (spec.time_windows) {
            put_f64(os, inst.tw_start.data(), static_cast<std::size_t>(n + 1));
            put_f64(os, inst.tw_end.data(), static_cast<std::size_t>(n + 1));
            put_f64(os, inst.service.data(), static_cast<std::size_t>(n));
        }
    }
    if (!os) throw std::runtime_error("write_dataset: write failed for " + path);
}

std::vector<Instance> read_dataset(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_dataset: cannot open " + path);

    char magic[8] = {};
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("read_dataset: bad magic in " + path);
    const std::uint32_t version = get_u32(is, "version");
    if (version != kVersion)
        throw std::runtime_error("read_dataset: unsupported version in " + path);
    const VariantSpec spec = VariantSpec::from_flags(get_u32(is, "flags") & 0xfu);
    const auto n = static_cast<int>(get_u32(is, "n"));
    const auto count = get_u32(is, "count");
    if (n < 1) throw std::runtime_error("read_dataset: invalid n in " + path);

    std::vector<Instance> out;
    out.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        Instance inst;
        inst.spec = spec;
        inst.capacity = 1.0;
        inst.coords.resize(static_cast<std::size_t>(n));
        inst.demands.resize(static_cast<std::size_t>(n));
        get_f64(is, inst.depot.data(), 2, "depot");
        get_f64(is, &inst.coords[0][0], static_cast<std::size_t>(2 * n), "coords");
        get_f64(is, inst.demands.data(), static_cast<std::size_t>(n), "demands");
        if (spec.duration_limit) {
            double limit = 0.0;
            get_f64(is, &limit, 1, "duration limit");
            inst.duration_limit = limit;
        }
        if (spec.time_windows) {
            inst.tw_start.resize(static_cast<std::size_t>(n + 1));
            inst.tw_end.resize(static_cast<std::size_t>(n + 1));
            inst.service.resize(static_cast<std::size_t>(n));
            get_f64(is, inst.tw_start.data(), static_cast<std::size_t>(n + 1), "tw_start");
            get_f64(is, inst.tw_end.data(), static_cast<std::size_t>(n + 1), "tw_end");
            get_f64(is, inst.service.data(), static_cast<std::size_t>(n), "service");
        }
        out.push_back(std::move(inst));
    }
    return out;
}

void export_dataset_text(const std::string& path,
                         const std::vector<Instance>& instances) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("export_dataset_text: cannot open " + path);
    os.precision(17);
    for (std::size_t k = 0; k < instances.size(); ++k) {
        const Instance& inst = instances[k];
        os << "instance: " << k << '\n';
        os << "variant: " << inst.spec.name() << '\n';
        os << "n: " << inst.n() << '\n';
        os << "capacity: " << inst.capacity << '\n';
        os << "depot: " << inst.depot[0] << ' ' << inst.depot[1] << '\n';
        for (int i = 1; i <= inst.n(); ++i) {
            const auto& c = inst.coords[static_cast<std::size_t>(i - 1)];
            os << "coord[" << i << "]: " << c[0] << ' ' << c[1] << '\n';
        }
        for (int i = 1; i <= inst.n(); ++i) {
            os << "demand[" << i << "]: "
               << inst.demands[static_cast<std::size_t>(i - 1)] << '\n';
        }
        if (inst.duration_limit)
            os << "duration_limit: " << *inst.duration_limit << '\n';
        if (inst.spec.time_windows) {
            for (int i = 0; i <= inst.n(); ++i) {
                os << "tw[" << i << "]: "
                   << inst.tw_start[static_cast<std::size_t>(i)] << ' '
                   << inst.tw_end[static_cast<std::size_t>(i)] << '\n';
            }
            for (int i = 1; i <= inst.n(); ++i) {
                os << "service[" << i << "]: "
                   << inst.service[static_cast<std::size_t>(i - 1)] << '\n';
            }
        }
        os << '\n';
    }
}

}  // namespace fedroute
