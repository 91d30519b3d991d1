#include "lame/app/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lame/error.hpp"

namespace lame::app {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json jnum(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(num(v)); }

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot write " + path.string());
  os << text;
  if (!os) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace

std::string record_label(const EstimateRecord& r) {
  return r.info.family.empty() ? r.name : r.name + "/" + r.info.family;
}

std::string csv_row(const EstimateRecord& r) {
  const ScenarioInfo& s = r.info;
  std::ostringstream os;
  os << quoted(record_label(r)) << ',' << s.n << ',' << s.N << ',' << num(s.L) << ',' << num(s.lambda) << ','
     << num(s.mu) << ',' << num(s.delta) << ',' << quoted(s.potential) << ',' << num(s.p) << ',' << num(s.q) << ','
     << num(s.r) << ',' << num(s.sigma) << ',' << num(r.lhs) << ',' << num(r.rhs) << ',' << num(r.ratio) << ','
     << num(r.ceiling) << ',' << (r.pass ? "true" : "false");
  return os.str();
}

std::string to_csv(std::span<const EstimateRecord> records, const std::string& timestamp) {
  std::string out = "# generated " + timestamp + "\n" + kCsvHeader + "\n";
  for (const auto& r : records) out += csv_row(r) + "\n";
  return out;
}

std::string to_json(std::span<const EstimateRecord> records, const std::string& timestamp) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : records) {
    const ScenarioInfo& s = r.info;
    rows.push_back({{"estimate", record_label(r)},
                    {"n", s.n},
                    {"N", s.N},
                    {"L_side", jnum(s.L)},
                    {"lambda", jnum(s.lambda)},
                    {"mu", jnum(s.mu)},
                    {"delta", jnum(s.delta)},
                    {"potential", s.potential},
                    {"p", jnum(s.p)},
                    {"q", jnum(s.q)},
                    {"r", jnum(s.r)},
                    {"sigma", jnum(s.sigma)},
                    {"lhs", jnum(r.lhs)},
                    {"rhs", jnum(r.rhs)},
                    {"ratio", jnum(r.ratio)},
                    {"ceiling", jnum(r.ceiling)},
                    {"pass", r.pass}});
  }
  nlohmann::json doc = {{"generated", timestamp}, {"records", rows}};
  return doc.dump(2) + "\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_report(const std::filesystem::path& path, std::span<const EstimateRecord> records) {
  const std::string ts = utc_timestamp();
  write_text(path, to_csv(records, ts));
  std::filesystem::path json_path = path;
  json_path.replace_extension(".json");
  if (json_path != path) write_text(json_path, to_json(records, ts));
}

std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     std::span<const Series> series, bool log_y) {
  constexpr double W = 640, H = 420, left = 70, right = 170, top = 40, bottom = 50;
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };

  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (log_y && !(s.y[i] > 0.0))) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-300) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  auto py = [&](double y) { return H - bottom - (ty(y) - y0) / (y1 - y0) * (H - top - bottom); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                 "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<!-- data\n";
  for (const auto& s : series) {
    os << "series " << s.label << "\n";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) os << "  " << num(s.x[i]) << " " << num(s.y[i]) << "\n";
  }
  os << "-->\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title)
     << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    char bx[32], by[32];
    std::snprintf(bx, sizeof bx, "%.3g", xv);
    std::snprintf(by, sizeof by, "%.3g", log_y ? std::pow(10.0, yv) : yv);
    const double yp = H - bottom - (yv - y0) / (y1 - y0) * (H - top - bottom);
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - bottom + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
       << bx << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << yp + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << by
       << "</text>\n";
  }
  os << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
     << xml_escape(x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << (top + H - bottom) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
     << (top + H - bottom) / 2 << ")\">" << xml_escape(y_label) << (log_y ? " (log)" : "") << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* c = colors[k % 10];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (log_y && !(s.y[i] > 0.0))) continue;
      char b[64];
      std::snprintf(b, sizeof b, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
      pts += b;
      os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" points=\"" << pts << "\"/>\n";
    const double ly = top + 14.0 * static_cast<double>(k);
    os << "<text x=\"" << W - right + 10 << "\" y=\"" << ly + 4 << "\" font-size=\"11\" fill=\"" << c << "\">"
       << xml_escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace lame::app
