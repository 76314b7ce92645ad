#include "invsim/history.hpp"

#include "invsim/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace invsim {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

const std::vector<Units>* DemandHistory::find(const std::string& id) const {
    const auto it = std::find(ids.begin(), ids.end(), id);
    return it == ids.end() ? nullptr : &columns[static_cast<std::size_t>(it - ids.begin())];
}

DemandHistory parse_history_csv(std::istream& in, const std::string& source) {
    DemandHistory h;
    std::string line;
    int line_no = 0;
    bool have_header = false;

    auto fail = [&](const std::string& what) {
        throw DataError(source + ":" + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (!have_header) {
            if (fields.size() < 2 || fields[0] != "day")
                fail("header must be 'day,<id1>,<id2>,...'");
            h.ids.assign(fields.begin() + 1, fields.end());
            for (const auto& id : h.ids)
                if (id.empty()) fail("empty product id in header");
            h.columns.resize(h.ids.size());
            have_header = true;
            continue;
        }
        if (fields.size() != h.ids.size() + 1)
            fail("expected " + std::to_string(h.ids.size() + 1) + " fields, got " +
                 std::to_string(fields.size()));
        for (std::size_t k = 1; k < fields.size(); ++k) {
            const auto& f = fields[k];
            Units v = 0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || ptr != f.data() + f.size() || f.empty())
                fail("demand '" + f + "' for " + h.ids[k - 1] + " is not a whole number");
            if (v < 0) fail("negative demand for " + h.ids[k - 1]);
            h.columns[k - 1].push_back(v);
        }
    }
    if (h.days() == 0) throw DataError(source + ": no observations");
    return h;
}

DemandHistory read_history_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open history file '" + path.string() + "'");
    return parse_history_csv(in, path.filename().string());
}

std::string history_to_csv(const DemandHistory& h) {
    std::ostringstream out;
    out << "day";
    for (const auto& id : h.ids) out << ',' << id;
    out << '\n';
    for (std::size_t d = 0; d < h.days(); ++d) {
        out << d + 1;
        for (const auto& col : h.columns) out << ',' << col[d];
        out << '\n';
    }
    return out.str();
}

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace invsim
