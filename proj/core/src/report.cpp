#include <algorithm>

#include "phoneboost/error.hpp"
#include "phoneboost/eval.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost::eval {

namespace {

constexpr std::string_view kHeader = "phoneboost-report 1";

void check_token(std::string_view s, std::string_view what) {
  const bool ok = !s.empty() && std::none_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\n' || c == '\t' || c == ','; });
  if (!ok) throw ValidationError(std::string(what) + " '" + std::string(s) + "' must be a nonempty token without spaces or commas");
}

std::string join(std::span<const double> values, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += text::format_double(values[i]);
  }
  return out;
}

std::vector<double> parse_values(const std::vector<std::string>& fields, std::size_t from) {
  std::vector<double> out;
  for (std::size_t i = from; i < fields.size(); ++i) out.push_back(text::parse_double(fields[i], "report value"));
  return out;
}

}  // namespace

double ExperimentReport::metric(std::string_view name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  throw InvalidArgument("report has no metric '" + std::string(name) + "'");
}

const Series& ExperimentReport::find_series(std::string_view label) const {
  for (const auto& s : series) {
    if (s.label == label) return s;
  }
  throw InvalidArgument("report has no series '" + std::string(label) + "'");
}

const Table& ExperimentReport::find_table(std::string_view name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw InvalidArgument("report has no table '" + std::string(name) + "'");
}

void ExperimentReport::validate() const {
  check_token(kind, "report kind");
  for (const auto& [k, v] : metrics) check_token(k, "metric name");
  for (const auto& s : series) {
    check_token(s.label, "series label");
    if (s.x.size() != s.y.size()) throw ValidationError("series '" + s.label + "' has unequal x and y lengths");
  }
  for (const auto& t : tables) {
    check_token(t.name, "table name");
    for (const auto& c : t.columns) check_token(c, "table column");
    for (const auto& [label, values] : t.rows) {
      check_token(label, "table row label");
      if (values.size() != t.columns.size()) {
        throw ValidationError("table '" + t.name + "' row '" + label + "' has " + std::to_string(values.size()) +
                              " values for " + std::to_string(t.columns.size()) + " columns");
      }
    }
  }
}

std::string to_text(const ExperimentReport& r) {
  r.validate();
  std::string out(kHeader);
  out += "\nkind " + r.kind + "\n";
  for (const auto& [k, v] : r.metrics) out += "metric " + k + " " + text::format_double(v) + "\n";
  for (const auto& s : r.series) {
    out += "series " + s.label + "\n";
    out += "x" + std::string(s.x.empty() ? "" : " ") + join(s.x, " ") + "\n";
    out += "y" + std::string(s.y.empty() ? "" : " ") + join(s.y, " ") + "\n";
  }
  for (const auto& t : r.tables) {
    out += "table " + t.name + "\ncolumns";
    for (const auto& c : t.columns) out += " " + c;
    out += "\n";
    for (const auto& [label, values] : t.rows) out += "row " + label + (values.empty() ? "" : " ") + join(values, " ") + "\n";
    out += "end\n";
  }
  return out;
}

ExperimentReport parse_report(std::string_view text_in) {
  std::vector<std::vector<std::string>> lines;
  for (const auto& l : text::split(text_in, '\n')) {
    auto fields = text::split_whitespace(l);
    if (!fields.empty()) lines.push_back(std::move(fields));
  }
  if (lines.empty() || lines[0] != std::vector<std::string>{"phoneboost-report", "1"}) {
    throw FormatError("report: missing header '" + std::string(kHeader) + "'");
  }
  ExperimentReport r;
  std::size_t i = 1;
  auto expect = [&](std::string_view key) -> const std::vector<std::string>& {
    if (i >= lines.size() || lines[i][0] != key) throw FormatError("report: expected '" + std::string(key) + "'");
    return lines[i++];
  };
  const auto& kind = expect("kind");
  if (kind.size() != 2) throw FormatError("report: kind line needs one token");
  r.kind = kind[1];
  while (i < lines.size()) {
    const auto& f = lines[i];
    if (f[0] == "metric" && f.size() == 3) {
      r.add_metric(f[1], text::parse_double(f[2], "metric value"));
      ++i;
    } else if (f[0] == "series" && f.size() == 2) {
      Series s;
      s.label = f[1];
      ++i;
      s.x = parse_values(expect("x"), 1);
      s.y = parse_values(expect("y"), 1);
      r.series.push_back(std::move(s));
    } else if (f[0] == "table" && f.size() == 2) {
      Table t;
      t.name = f[1];
      ++i;
      const auto& cols = expect("columns");
      t.columns.assign(cols.begin() + 1, cols.end());
      while (i < lines.size() && lines[i][0] == "row") {
        if (lines[i].size() < 2) throw FormatError("report: row without a label");
        t.rows.emplace_back(lines[i][1], parse_values(lines[i], 2));
        ++i;
      }
      expect("end");
      r.tables.push_back(std::move(t));
    } else {
      throw FormatError("report: unexpected line starting with '" + f[0] + "'");
    }
  }
  r.validate();
  return r;
}

std::string to_csv(const ExperimentReport& r) {
  r.validate();
  std::string out = "metric,value\n";
  for (const auto& [k, v] : r.metrics) out += k + "," + text::format_double(v) + "\n";
  if (!r.series.empty()) {
    out += "\nseries,x,y\n";
    for (const auto& s : r.series) {
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        out += s.label + "," + text::format_double(s.x[k]) + "," + text::format_double(s.y[k]) + "\n";
      }
    }
  }
  for (const auto& t : r.tables) {
    out += "\n" + t.name;
    for (const auto& c : t.columns) out += "," + c;
    out += "\n";
    for (const auto& [label, values] : t.rows) out += label + (values.empty() ? "" : ",") + join(values, ",") + "\n";
  }
  return out;
}

void write_report(const std::filesystem::path& path, const ExperimentReport& r) {
  text::write_file(path, path.extension() == ".csv" ? to_csv(r) : to_text(r));
}

}  // namespace phoneboost::eval
