#include "sdsim/csv.hpp"

#include <fstream>

#include "sdsim/errors.hpp"
#include "sdsim/format.hpp"

namespace sdsim {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string csv_text(const RunResult& result) {
    std::string out = "time";
    for (const auto& n : result.names) {
        out += ',';
        out += csv_field(n);
    }
    out += '\n';
    for (std::size_t row = 0; row < result.times.size(); ++row) {
        out += format_double(result.times[row]);
        for (const auto& series : result.values) {
            out += ',';
            out += format_double(series[row]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const RunResult& result, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    std::string text = csv_text(result);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw IoError("write failed for " + path);
}

}  // namespace sdsim
