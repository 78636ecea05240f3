#include "mdicke/output.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mdicke {

std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string hex64(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string format_double(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

nlohmann::json json_number(double value)
{
    if (!std::isfinite(value)) return format_double(value);
    return value;
}

CsvWriter::CsvWriter(std::ostream& out, const Metadata& meta, std::vector<std::string> columns)
    : out_(out), width_(columns.size())
{
    for (const auto& [key, value] : meta) {
        out_ << "# " << key << '=' << value << '\n';
    }
    row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != width_) {
        throw std::logic_error("CsvWriter: row width does not match header");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

}  // namespace mdicke
