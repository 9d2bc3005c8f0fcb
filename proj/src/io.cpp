#include "lfd/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lfd {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is written as raw little-endian doubles");

namespace {
constexpr std::size_t kHeaderSize = 64;
constexpr char kMagic[] = "LFD1";
} // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_checkpoint(const Distribution& f, double gamma, double t,
                      const std::string& path) {
    char header[kHeaderSize];
    std::memset(header, ' ', kHeaderSize);
    const int written =
        std::snprintf(header, kHeaderSize, "%s %d %.12g %.12g %.12g %.12g",
                      kMagic, f.grid().n(), f.grid().extent(), f.epsilon,
                      gamma, t);
    if (written < 0 || written >= static_cast<int>(kHeaderSize))
        throw CheckpointCorrupt("checkpoint header does not fit 64 bytes");
    header[written] = ' ';  // drop the terminator, keep space padding

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointCorrupt("cannot open " + path + " for writing");
    out.write(header, kHeaderSize);
    out.write(reinterpret_cast<const char*>(f.values.data.data()),
              static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (!out) throw CheckpointCorrupt("short write to " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointCorrupt("cannot open " + path);
    char header[kHeaderSize + 1] = {};
    in.read(header, kHeaderSize);
    if (in.gcount() != static_cast<std::streamsize>(kHeaderSize))
        throw CheckpointCorrupt("truncated header in " + path);

    std::istringstream hs(std::string(header, kHeaderSize));
    std::string magic;
    int n = 0;
    double R = 0, eps = 0, gamma = 0, t = 0;
    hs >> magic >> n >> R >> eps >> gamma >> t;
    if (!hs || magic != kMagic)
        throw CheckpointCorrupt("bad magic or malformed header in " + path);

    VelocityGrid grid(R, n);
    Distribution f(grid, eps);
    in.read(reinterpret_cast<char*>(f.values.data.data()),
            static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (in.gcount() !=
        static_cast<std::streamsize>(f.size() * sizeof(double)))
        throw CheckpointCorrupt("truncated payload in " + path);
    return {std::move(f), gamma, t};
}

void write_csv(const std::string& path, const std::vector<std::string>& cols,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigurationError("cannot open " + path + " for writing");
    for (std::size_t c = 0; c < cols.size(); ++c)
        out << (c ? "," : "") << cols[c];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != cols.size())
            throw ConfigurationError("csv row width does not match header");
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_double(row[c]);
        out << '\n';
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigurationError("cannot open " + path + " for writing");
    out << content;
}

} // namespace lfd
