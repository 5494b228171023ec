#include <cstdio>
#include <numeric>

#include "rr/error.hpp"
#include "rr/matrix.hpp"

namespace rr {

ReportFormat parse_report_format(std::string_view name) {
  if (name == "table-text" || name == "table" || name == "text") return ReportFormat::TableText;
  if (name == "csv") return ReportFormat::Csv;
  throw ConfigError("unknown report format '" + std::string(name) + "' (table-text or csv)");
}

namespace {

// ".92", "1.00"
std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  return s;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string render_table(const TransferMatrix& m) {
  const std::size_t sub = std::max<std::size_t>(
      7, std::accumulate(m.backends.begin(), m.backends.end(), std::size_t{0},
                         [](std::size_t w, const std::string& b) { return std::max(w, b.size() + 2); }));
  std::size_t first = 4;
  for (const auto& p : m.pools) first = std::max(first, p.name().size());
  first += 2;
  const std::size_t group = sub * m.backends.size();

  std::string out;
  out += pad("Pool", first);
  for (DatasetId t : m.targets) out += "| " + pad(std::string(to_string(t)), group);
  out += "| Avg\n";
  out += pad("", first);
  for (std::size_t g = 0; g <= m.targets.size(); ++g) {
    out += "| ";
    for (const auto& b : m.backends) out += pad(b, sub);
  }
  out += '\n';
  out += std::string(first, '-');
  for (std::size_t g = 0; g <= m.targets.size(); ++g) out += "+" + std::string(group + 1, '-');
  out += '\n';

  for (const auto& pool : m.pools) {
    out += pad(pool.name(), first);
    for (DatasetId t : m.targets) {
      out += "| ";
      for (const auto& b : m.backends) {
        const CellResult* c = m.find(b, pool, t);
        std::string cell = !c ? "--" : !c->ok ? "FAIL" : two_decimals(c->metrics.f1);
        if (c && c->ok && pool.contains(t)) cell += '*';
        out += pad(cell, sub);
      }
    }
    out += "| ";
    for (const auto& b : m.backends) {
      double sum = 0.0;
      bool all_ok = !m.targets.empty();
      for (DatasetId t : m.targets) {
        const CellResult* c = m.find(b, pool, t);
        if (!c || !c->ok) {
          all_ok = false;
          break;
        }
        sum += c->metrics.f1;
      }
      out += pad(all_ok ? two_decimals(sum / static_cast<double>(m.targets.size())) : "n/a", sub);
    }
    out += '\n';
  }
  out += "\nF1 (positive class Facts). * target in training pool; Avg is the mean over all "
         "targets, in-domain included.\n";
  if (const auto failed = m.failed_cells()) out += std::to_string(failed) + " cell(s) FAILED.\n";
  return out;
}

std::string render_csv(const TransferMatrix& m) {
  std::string out = "pool,backend,target,precision,recall,f1\n";
  char buf[128];
  for (const auto& pool : m.pools) {
    for (const auto& b : m.backends) {
      for (DatasetId t : m.targets) {
        const CellResult* c = m.find(b, pool, t);
        out += pool.name() + "," + b + "," + std::string(to_string(t)) + ",";
        if (c && c->ok) {
          std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f", c->metrics.precision, c->metrics.recall,
                        c->metrics.f1);
          out += buf;
        } else {
          out += ",,";
        }
        out += '\n';
      }
    }
  }
  return out;
}

}  // namespace

std::string render_report(const TransferMatrix& matrix, ReportFormat format) {
  return format == ReportFormat::Csv ? render_csv(matrix) : render_table(matrix);
}

}  // namespace rr
