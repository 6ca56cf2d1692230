#include "xydisc/config_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace xydisc {

static_assert(std::endian::native == std::endian::little, "binary payload assumes a little-endian host");

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <typename T>
void put(std::ostream& out, T value) {
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    out.write(bytes, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    char bytes[sizeof(T)];
    if (!in.read(bytes, sizeof(T))) throw std::runtime_error("truncated configuration payload");
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

std::string expect_key(std::istream& in, const std::string& key) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("truncated configuration header");
    std::istringstream ls(line);
    std::string k, v;
    ls >> k >> v;
    if (k != key || v.empty()) throw std::runtime_error("expected header key '" + key + "', got '" + line + "'");
    return v;
}

}  // namespace

void write_config(std::ostream& out, const StoredConfig& stored) {
    const Lattice lattice(stored.spec);
    const bool angles = std::holds_alternative<ContinuousConfig>(stored.config);
    const std::size_t count = angles ? std::get<ContinuousConfig>(stored.config).size()
                                     : std::get<DiscreteConfig>(stored.config).size();
    if (count != lattice.site_count()) throw std::invalid_argument("configuration size does not match lattice");
    if (!angles && std::get<DiscreteConfig>(stored.config).q() != stored.partition.q())
        throw std::invalid_argument("label count does not match partition");

    out << "xydisc-config 1\n"
        << "d " << stored.spec.dimension << "\n"
        << "L " << stored.spec.side << "\n"
        << "boundary " << to_string(stored.spec.boundary) << "\n"
        << "q " << stored.partition.q() << "\n"
        << "offset " << format_double(stored.partition.offset()) << "\n"
        << "kind " << (angles ? "angles" : "labels") << "\n"
        << "count " << count << "\n"
        << "end\n";
    if (angles) {
        for (double a : std::get<ContinuousConfig>(stored.config).angles()) put<double>(out, a);
    } else {
        for (int l : std::get<DiscreteConfig>(stored.config).labels()) put<std::uint32_t>(out, static_cast<std::uint32_t>(l));
    }
    if (!out) throw std::runtime_error("failed to write configuration");
}

StoredConfig read_config(std::istream& in) {
    std::string magic;
    if (!std::getline(in, magic) || magic != "xydisc-config 1") throw std::runtime_error("not an xydisc configuration");
    StoredConfig stored;
    stored.spec.dimension = std::stoi(expect_key(in, "d"));
    stored.spec.side = std::stoi(expect_key(in, "L"));
    stored.spec.boundary = parse_boundary(expect_key(in, "boundary"));
    const int q = std::stoi(expect_key(in, "q"));
    const double offset = std::stod(expect_key(in, "offset"));
    stored.partition = ArcPartition(q, offset);
    const std::string kind = expect_key(in, "kind");
    const std::size_t count = std::stoull(expect_key(in, "count"));
    std::string end;
    if (!std::getline(in, end) || end != "end") throw std::runtime_error("missing header terminator");

    const Lattice lattice(stored.spec);
    if (count != lattice.site_count()) throw std::runtime_error("site count does not match lattice header");
    if (kind == "angles") {
        std::vector<double> a(count);
        for (auto& v : a) v = get<double>(in);
        stored.config = ContinuousConfig(std::move(a));
    } else if (kind == "labels") {
        std::vector<int> l(count);
        for (auto& v : l) v = static_cast<int>(get<std::uint32_t>(in));
        stored.config = DiscreteConfig(q, std::move(l));
    } else {
        throw std::runtime_error("unknown configuration kind '" + kind + "'");
    }
    return stored;
}

}  // namespace xydisc
