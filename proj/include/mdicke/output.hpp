// output.hpp: deterministic text formatting for CSV/JSON records.

#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mdicke {

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t value);

// Round-trip formatting; non-finite values print as "inf", "-inf", "nan".
std::string format_double(double value);

// JSON value for a double with the same non-finite convention.
nlohmann::json json_number(double value);

inline constexpr std::string_view kCodeVersion = MDICKE_VERSION;

// Key/value block written as "# key=value" lines ahead of the CSV header.
// No timestamps, so identical inputs give identical bytes.
using Metadata = std::map<std::string, std::string>;

class CsvWriter {
public:
    CsvWriter(std::ostream& out, const Metadata& meta, std::vector<std::string> columns);

    void row(const std::vector<std::string>& cells);

private:
    std::ostream& out_;
    std::size_t width_;
};

}  // namespace mdicke
