#include <algorithm>
#include <iomanip>
#include <sstream>

#include "envmm/cli.hpp"

namespace envmm::cli {

using nlohmann::json;

namespace {

constexpr int kKeyWidth = 28;
constexpr int kColWidth = 16;

std::string cell(const json& v) {
  std::ostringstream ss;
  if (v.is_boolean()) {
    ss << (v.get<bool>() ? "yes" : "no");
  } else if (v.is_number_integer() || v.is_number_unsigned()) {
    ss << v.get<long long>();
  } else if (v.is_number_float()) {
    ss << std::setprecision(6) << v.get<double>();
  } else if (v.is_string()) {
    ss << v.get<std::string>();
  } else if (v.is_array()) {
    ss << "[" << v.size() << "]";
  } else {
    ss << "{}";
  }
  return ss.str();
}

bool is_table(const json& v) { return v.is_array() && !v.empty() && v.front().is_object(); }

void emit_table(std::ostringstream& out, const std::string& title, const json& rows);

void emit_scalars(std::ostringstream& out, const json& obj, const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (value.is_object()) {
      emit_scalars(out, value, prefix + key + ".");
    } else if (!is_table(value) && !value.is_array()) {
      out << std::left << std::setw(kKeyWidth) << prefix + key << ' ' << cell(value) << '\n';
    }
  }
}

void emit_tables(std::ostringstream& out, const json& obj, const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (value.is_object()) {
      emit_tables(out, value, prefix + key + ".");
    } else if (is_table(value)) {
      emit_table(out, prefix + key, value);
    }
  }
}

// One column per scalar field of the first row; nested record lists get their own table.
void emit_table(std::ostringstream& out, const std::string& title, const json& rows) {
  std::vector<std::string> cols;
  for (const auto& [k, v] : rows.front().items()) {
    if (!v.is_array() && !v.is_object()) cols.push_back(k);
  }
  std::vector<int> widths;
  for (const auto& c : cols) widths.push_back(std::max<int>(kColWidth, static_cast<int>(c.size()) + 2));
  out << '\n' << title << '\n';
  out << std::right << std::setw(6) << "#";
  for (std::size_t k = 0; k < cols.size(); ++k) out << std::setw(widths[k]) << cols[k];
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << std::setw(6) << i;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out << std::setw(widths[k]) << (rows[i].contains(cols[k]) ? cell(rows[i][cols[k]]) : "-");
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [k, v] : rows[i].items()) {
      if (is_table(v)) emit_table(out, title + "[" + std::to_string(i) + "]." + k, v);
    }
  }
}

}  // namespace

std::string emit_summary(const json& report) {
  std::ostringstream out;
  json rest = report;
  rest.erase("operator");  // matrices are not tabulated
  const std::string kind = rest.value("kind", std::string("report"));
  rest.erase("kind");
  out << "== " << kind << " ==\n";
  emit_scalars(out, rest, "");
  emit_tables(out, rest, "");
  return out.str();
}

}  // namespace envmm::cli
