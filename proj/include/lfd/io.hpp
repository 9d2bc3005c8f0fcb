#pragma once

#include <string>
#include <vector>

#include "lfd/distribution.hpp"

namespace lfd {

struct Checkpoint {
    Distribution f;
    double gamma;
    double t;
};

/// Binary snapshot: 64-byte text header "LFD1 N R eps gamma t" (space padded)
/// followed by little-endian 64-bit node values, i fastest. Read/write is
/// bit-exact.
void write_checkpoint(const Distribution& f, double gamma, double t,
                      const std::string& path);
Checkpoint read_checkpoint(const std::string& path);

/// %.17g — lossless decimal round-trip for doubles.
std::string format_double(double x);

void write_csv(const std::string& path, const std::vector<std::string>& cols,
               const std::vector<std::vector<double>>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace lfd
