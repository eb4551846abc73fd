#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "phirm/experiment.h"

namespace phirm {

const char kTraceCsvHeader[] =
    "t,realized_objective,blackwell_lhs,blackwell_rhs,g_error_sum,"
    "theorem_rhs,potential,potential_bound";

namespace {

// Shortest representation that parses back to the same double.
void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_long(std::string& out, long v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

double parse_field(const std::string& field, long row, const char* name) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw std::runtime_error("trace row " + std::to_string(row) + ": field " +
                             name + " is not a number: '" + field + "'");
  if (!std::isfinite(v))
    throw std::runtime_error("trace row " + std::to_string(row) + ": field " +
                             name + " is not finite");
  return v;
}

const char* kColumnNames[8] = {
    "t",           "realized_objective", "blackwell_lhs", "blackwell_rhs",
    "g_error_sum", "theorem_rhs",        "potential",     "potential_bound"};

}  // namespace

void write_trace_csv(const std::string& path,
                     const std::vector<BoundRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open " + path + " for writing");
  out << kTraceCsvHeader << '\n';
  std::string line;
  line.reserve(200);
  for (const BoundRow& r : rows) {
    line.clear();
    append_long(line, r.t);
    line.push_back(',');
    append_double(line, r.realized_objective);
    line.push_back(',');
    append_double(line, r.blackwell_lhs);
    line.push_back(',');
    append_double(line, r.blackwell_rhs);
    line.push_back(',');
    append_double(line, r.g_error_sum);
    line.push_back(',');
    append_double(line, r.theorem_rhs);
    line.push_back(',');
    append_double(line, r.potential);
    line.push_back(',');
    append_double(line, r.potential_bound);
    line.push_back('\n');
    out << line;
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<BoundRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceCsvHeader)
    throw std::runtime_error(path + ": header mismatch, got '" + line + "'");
  std::vector<BoundRow> rows;
  long row_index = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row_index;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 8)
      throw std::runtime_error("trace row " + std::to_string(row_index) +
                               ": expected 8 columns, got " +
                               std::to_string(fields.size()));
    BoundRow r;
    const double td = parse_field(fields[0], row_index, kColumnNames[0]);
    if (td != std::floor(td))
      throw std::runtime_error("trace row " + std::to_string(row_index) +
                               ": t must be an integer");
    r.t = static_cast<long>(td);
    if (r.t != row_index)
      throw std::runtime_error("trace row " + std::to_string(row_index) +
                               ": t is " + std::to_string(r.t) +
                               ", expected " + std::to_string(row_index));
    r.realized_objective = parse_field(fields[1], row_index, kColumnNames[1]);
    r.blackwell_lhs = parse_field(fields[2], row_index, kColumnNames[2]);
    r.blackwell_rhs = parse_field(fields[3], row_index, kColumnNames[3]);
    r.g_error_sum = parse_field(fields[4], row_index, kColumnNames[4]);
    r.theorem_rhs = parse_field(fields[5], row_index, kColumnNames[5]);
    r.potential = parse_field(fields[6], row_index, kColumnNames[6]);
    r.potential_bound = parse_field(fields[7], row_index, kColumnNames[7]);
    rows.push_back(r);
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");
  return rows;
}

bool VerifyReport::all_ok() const {
  if (!schema_ok) return false;
  for (const VerifyCheck& c : checks)
    if (!c.ok) return false;
  return true;
}

VerifyReport verify_trace(const std::string& path) {
  VerifyReport report;
  std::vector<BoundRow> rows;
  try {
    rows = read_trace_csv(path);
    report.schema_ok = true;
  } catch (const std::exception& e) {
    report.schema_ok = false;
    report.schema_error = e.what();
    return report;
  }

  VerifyCheck approach{"approachability", true, 0, ""};
  VerifyCheck domination{"bound_domination", true, 0, ""};
  VerifyCheck envelope{"potential_envelope", true, 0, ""};
  VerifyCheck monotone{"error_monotone", true, 0, ""};
  double prev_err = 0.0;
  for (const BoundRow& r : rows) {
    if (approach.ok && r.blackwell_lhs > r.blackwell_rhs + 1e-8) {
      approach.ok = false;
      approach.row = r.t;
      approach.detail = "blackwell_lhs " + std::to_string(r.blackwell_lhs) +
                        " > blackwell_rhs " + std::to_string(r.blackwell_rhs);
    }
    if (domination.ok && r.realized_objective > r.theorem_rhs + 1e-8) {
      domination.ok = false;
      domination.row = r.t;
      domination.detail =
          "realized_objective " + std::to_string(r.realized_objective) +
          " > theorem_rhs " + std::to_string(r.theorem_rhs);
    }
    if (envelope.ok && r.potential > r.potential_bound + 1e-6) {
      envelope.ok = false;
      envelope.row = r.t;
      envelope.detail = "potential " + std::to_string(r.potential) +
                        " > potential_bound " +
                        std::to_string(r.potential_bound);
    }
    if (monotone.ok && r.g_error_sum < prev_err - 1e-12) {
      monotone.ok = false;
      monotone.row = r.t;
      monotone.detail = "g_error_sum decreased from " +
                        std::to_string(prev_err) + " to " +
                        std::to_string(r.g_error_sum);
    }
    prev_err = r.g_error_sum;
  }
  report.checks = {approach, domination, envelope, monotone};
  return report;
}

namespace {

std::string svg_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

void write_summary_svg(const std::string& path,
                       const std::vector<BoundRow>& averaged,
                       const std::vector<BoundRow>* averaged2) {
  if (averaged.empty())
    throw std::invalid_argument("write_summary_svg: empty trace");
  const int width = 900, height = 520;
  const int ml = 80, mr = 24, mt = 42, mb = 56;
  const double x0 = 1.0, x1 = static_cast<double>(averaged.back().t);

  double ymin = 0.0, ymax = 0.0;
  auto scan = [&](const std::vector<BoundRow>& rows) {
    for (const BoundRow& r : rows) {
      ymin = std::min({ymin, r.realized_objective, r.theorem_rhs});
      ymax = std::max({ymax, r.realized_objective, r.theorem_rhs});
    }
  };
  scan(averaged);
  if (averaged2) scan(*averaged2);
  if (ymax <= ymin) ymax = ymin + 1.0;

  const double plot_w = width - ml - mr, plot_h = height - mt - mb;
  const double xspan = std::max(x1 - x0, 1.0);
  auto px = [&](double t) { return ml + (t - x0) / xspan * plot_w; };
  auto py = [&](double v) {
    return mt + (ymax - v) / (ymax - ymin) * plot_h;
  };

  const std::size_t stride =
      std::max<std::size_t>(1, averaged.size() / 1200);
  auto polyline = [&](const std::vector<BoundRow>& rows, double BoundRow::*col,
                      const char* color) {
    std::string pts;
    for (std::size_t i = 0; i < rows.size(); i += stride) {
      pts += svg_num(px(static_cast<double>(rows[i].t)));
      pts += ',';
      pts += svg_num(py(rows[i].*col));
      pts += ' ';
    }
    if ((rows.size() - 1) % stride != 0) {
      pts += svg_num(px(static_cast<double>(rows.back().t)));
      pts += ',';
      pts += svg_num(py(rows.back().*col));
    }
    return std::string("  <polyline fill=\"none\" stroke=\"") + color +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "  <rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "  <text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"15\">seed-averaged realized objective vs bound</text>\n";
  // Axes.
  out << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << (height - mb) << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << ml << "\" y1=\"" << (height - mb) << "\" x2=\""
      << (width - mr) << "\" y2=\"" << (height - mb)
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = ymin + (ymax - ymin) * k / 4.0;
    const double y = py(v);
    out << "  <line x1=\"" << (ml - 4) << "\" y1=\"" << svg_num(y) << "\" x2=\""
        << ml << "\" y2=\"" << svg_num(y) << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << (ml - 8) << "\" y=\"" << svg_num(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">"
        << tick_label(v) << "</text>\n";
    const double tv = x0 + (x1 - x0) * k / 4.0;
    const double x = px(tv);
    out << "  <line x1=\"" << svg_num(x) << "\" y1=\"" << (height - mb)
        << "\" x2=\"" << svg_num(x) << "\" y2=\"" << (height - mb + 4)
        << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << svg_num(x) << "\" y=\"" << (height - mb + 18)
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">"
        << tick_label(tv) << "</text>\n";
  }
  out << "  <text x=\"" << (ml + plot_w / 2) << "\" y=\"" << (height - 14)
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">t</text>\n";
  out << polyline(averaged, &BoundRow::theorem_rhs, "#d62728");
  out << polyline(averaged, &BoundRow::realized_objective, "#1f77b4");
  if (averaged2)
    out << polyline(*averaged2, &BoundRow::realized_objective, "#2ca02c");
  // Legend.
  const int lx = width - mr - 260, ly = mt + 10;
  out << "  <line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << (lx + 24)
      << "\" y2=\"" << ly << "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n"
      << "  <text x=\"" << (lx + 30) << "\" y=\"" << (ly + 4)
      << "\" font-family=\"sans-serif\" font-size=\"12\">theorem_rhs</text>\n";
  out << "  <line x1=\"" << lx << "\" y1=\"" << (ly + 18) << "\" x2=\""
      << (lx + 24) << "\" y2=\"" << (ly + 18)
      << "\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n"
      << "  <text x=\"" << (lx + 30) << "\" y=\"" << (ly + 22)
      << "\" font-family=\"sans-serif\" font-size=\"12\">realized_objective"
      << (averaged2 ? " (player 1)" : "") << "</text>\n";
  if (averaged2)
    out << "  <line x1=\"" << lx << "\" y1=\"" << (ly + 36) << "\" x2=\""
        << (lx + 24) << "\" y2=\"" << (ly + 36)
        << "\" stroke=\"#2ca02c\" stroke-width=\"1.5\"/>\n"
        << "  <text x=\"" << (lx + 30) << "\" y=\"" << (ly + 40)
        << "\" font-family=\"sans-serif\" font-size=\"12\">realized_objective "
           "(player 2)</text>\n";
  out << "</svg>\n";
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace phirm
