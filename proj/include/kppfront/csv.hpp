// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "kppfront/errors.hpp"

namespace kppfront {

inline constexpr const char* toolkit_name = "kppfront";
inline constexpr const char* toolkit_version = "0.1.0";

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// CSV file with '#'-prefixed metadata lines (toolkit version plus the full
/// resolved configuration), then a header row, then 17-significant-digit
/// rows. No timestamps: repeated runs are byte-identical.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) raise(errc::io_error, "cannot open output file: " + path);
        out_ << "# " << toolkit_name << " " << toolkit_version << "\n";
    }

    void meta(const std::string& key, const std::string& value) {
        out_ << "# " << key << " = " << value << "\n";
    }

    void meta_all(const std::vector<std::pair<std::string, std::string>>& kv) {
        for (const auto& [k, v] : kv) meta(k, v);
    }

    void header(std::initializer_list<const char*> cols) {
        bool first = true;
        for (const char* c : cols) {
            if (!first) out_ << ",";
            out_ << c;
            first = false;
        }
        out_ << "\n";
    }

    void row(std::initializer_list<double> vals) {
        bool first = true;
        for (double v : vals) {
            if (!first) out_ << ",";
            out_ << g17(v);
            first = false;
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

} // namespace kppfront
