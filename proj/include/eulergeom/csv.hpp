#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include "eulergeom/common.hpp"

namespace eulergeom {

// Shortest round-trip decimal representation (byte-stable regression diffs).
inline std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class CsvWriter {
  public:
    // The optional preamble line names the functional and its stable check id
    // ahead of the column header.
    CsvWriter(const std::string& path, const std::vector<std::string>& header,
              const std::string& preamble = "") : out_(path) {
        if (!out_) throw ConfigError("csv: cannot open " + path + " for writing");
        if (!preamble.empty()) out_ << preamble << '\n';
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << format_double(values[i]);
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

}  // namespace eulergeom
