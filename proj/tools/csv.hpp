// csv.hpp — locale-independent CSV output, 15 significant digits

#pragma once

#include <charconv>
#include <fstream>
#include <string>

#include "nmme/errors.hpp"

namespace nmme::cli {

inline std::string format_number(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 15);
    return std::string(buf, res.ptr);
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& header) : out_(path) {
        if (!out_) throw ConfigError("output: cannot open " + path + " for writing");
        out_ << header << "\n";
    }

    template <typename... Ts>
    void row(Ts... values) {
        bool first = true;
        ((out_ << (first ? "" : ",") << format_number(double(values)), first = false), ...);
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

}  // namespace nmme::cli
