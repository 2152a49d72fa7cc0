#include "hope/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "hope/error.hpp"

namespace hope {

std::size_t LabelSet::unlabeled_count() const noexcept {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kUnlabeled));
}

LabelSet make_label_set(std::vector<std::int32_t> labels, std::size_t class_count) {
  for (auto l : labels) {
    if (l != LabelSet::kUnlabeled && (l < 0 || static_cast<std::size_t>(l) >= class_count)) {
      throw std::invalid_argument("make_label_set: label out of range");
    }
  }
  LabelSet out;
  out.labels = std::move(labels);
  for (std::size_t c = 0; c < class_count; ++c) out.class_names.push_back(std::to_string(c));
  return out;
}

LabelSet parse_labels(std::string_view text, const IdMap& target_ids) {
  LabelSet out;
  out.labels.assign(target_ids.size(), LabelSet::kUnlabeled);
  std::unordered_map<std::string, std::int32_t> classes;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 >= line.size() ||
        line.find('\t', tab + 1) != std::string_view::npos) {
      throw ParseError("expected 'vertex_id <TAB> label'", line_no);
    }
    const auto id = line.substr(0, tab);
    const std::string name(line.substr(tab + 1));
    auto [it, inserted] =
        classes.try_emplace(name, static_cast<std::int32_t>(out.class_names.size()));
    if (inserted) out.class_names.push_back(name);
    const auto index = target_ids.find(id);
    if (!index) {
      ++out.unknown_vertices;
      continue;
    }
    auto& slot = out.labels[*index];
    if (slot != LabelSet::kUnlabeled && slot != it->second) {
      throw ParseError("conflicting labels for vertex '" + std::string(id) + "'", line_no);
    }
    slot = it->second;
  }
  return out;
}

LabelSet load_labels(const std::filesystem::path& path, const IdMap& target_ids) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open label file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_labels(buffer.str(), target_ids);
}

void write_labels(const LabelSet& labels, const IdMap& ids, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    if (labels.labels[i] == LabelSet::kUnlabeled) continue;
    out << ids.name(i) << '\t' << labels.class_names[labels.labels[i]] << '\n';
  }
}

std::vector<std::vector<std::size_t>> contingency_table(std::span<const std::uint32_t> pred,
                                                        std::size_t k,
                                                        std::span<const std::int32_t> truth,
                                                        std::size_t classes) {
  if (pred.size() != truth.size()) {
    throw std::invalid_argument("prediction and labels cover different vertex counts");
  }
  std::vector<std::vector<std::size_t>> table(k, std::vector<std::size_t>(classes, 0));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (truth[i] == LabelSet::kUnlabeled) continue;
    if (pred[i] >= k || truth[i] < 0 || static_cast<std::size_t>(truth[i]) >= classes) {
      throw std::invalid_argument("contingency_table: index out of range");
    }
    ++table[pred[i]][static_cast<std::size_t>(truth[i])];
  }
  return table;
}

std::vector<std::size_t> max_weight_matching(const std::vector<std::vector<double>>& weights) {
  const std::size_t n = weights.size();
  if (n == 0) return {};
  double top = 0.0;
  for (const auto& row : weights) {
    if (row.size() != n) throw std::invalid_argument("max_weight_matching: matrix must be square");
    for (double w : row) top = std::max(top, w);
  }
  // Shortest augmenting paths with potentials on cost = top - weight, 1-based indexing.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = (top - weights[i0 - 1][j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

namespace {

using Table = std::vector<std::vector<std::size_t>>;

struct Margins {
  std::vector<double> rows;
  std::vector<double> cols;
  double total = 0.0;
};

Margins margins(const Table& t) {
  Margins m;
  m.rows.assign(t.size(), 0.0);
  m.cols.assign(t.empty() ? 0 : t.front().size(), 0.0);
  for (std::size_t p = 0; p < t.size(); ++p) {
    for (std::size_t c = 0; c < t[p].size(); ++c) {
      m.rows[p] += static_cast<double>(t[p][c]);
      m.cols[c] += static_cast<double>(t[p][c]);
    }
  }
  for (double r : m.rows) m.total += r;
  return m;
}

// Cluster-to-class matching on the zero-padded square table; entry p gives the class
// matched to cluster p (or an index >= class count for padding). Among matchings with the
// most agreeing vertices, the one with the largest summed per-class F1 wins, so the result
// does not depend on how clusters are numbered. The F1 terms sum to at most `classes`, so
// scaling counts by classes + 1 keeps agreement strictly first.
std::vector<std::size_t> match_clusters(const Table& t, const Margins& m) {
  const std::size_t k = t.size();
  const std::size_t classes = m.cols.size();
  const std::size_t n = std::max(k, classes);
  const double scale = static_cast<double>(classes + 1);
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t c = 0; c < classes; ++c) {
      const double hit = static_cast<double>(t[p][c]);
      if (hit == 0.0) continue;
      w[p][c] = hit * scale + 2.0 * hit / (m.rows[p] + m.cols[c]);
    }
  }
  return max_weight_matching(w);
}

double entropy(const std::vector<double>& counts, double total) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / total) * std::log(c / total);
  }
  return h;
}

double choose2(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace

double accuracy(const Table& t) {
  const Margins m = margins(t);
  if (m.total == 0.0) return 0.0;
  const auto match = match_clusters(t, m);
  double hit = 0.0;
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (match[p] < m.cols.size()) hit += static_cast<double>(t[p][match[p]]);
  }
  return hit / m.total;
}

double f1_macro(const Table& t) {
  const Margins m = margins(t);
  if (m.total == 0.0) return 0.0;
  const auto match = match_clusters(t, m);
  std::vector<double> per_class(m.cols.size(), 0.0);
  for (std::size_t p = 0; p < t.size(); ++p) {
    const std::size_t c = match[p];
    if (c >= m.cols.size()) continue;
    const double hit = static_cast<double>(t[p][c]);
    if (hit > 0.0) per_class[c] = 2.0 * hit / (m.rows[p] + m.cols[c]);
  }
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < m.cols.size(); ++c) {
    if (m.cols[c] == 0.0) continue;
    sum += per_class[c];
    ++present;
  }
  return present > 0 ? sum / static_cast<double>(present) : 0.0;
}

double nmi(const Table& t) {
  const Margins m = margins(t);
  if (m.total == 0.0) return 0.0;
  const double hp = entropy(m.rows, m.total);
  const double ht = entropy(m.cols, m.total);
  if (hp == 0.0 || ht == 0.0) return hp == ht ? 1.0 : 0.0;
  double mi = 0.0;
  for (std::size_t p = 0; p < t.size(); ++p) {
    for (std::size_t c = 0; c < t[p].size(); ++c) {
      const double n = static_cast<double>(t[p][c]);
      if (n == 0.0) continue;
      mi += (n / m.total) * std::log(n * m.total / (m.rows[p] * m.cols[c]));
    }
  }
  return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

double ari(const Table& t) {
  const Margins m = margins(t);
  double index = 0.0;
  for (const auto& row : t) {
    for (auto n : row) index += choose2(static_cast<double>(n));
  }
  double a = 0.0;
  for (double r : m.rows) a += choose2(r);
  double b = 0.0;
  for (double c : m.cols) b += choose2(c);
  const double pairs = choose2(m.total);
  if (pairs == 0.0) return 1.0;
  const double expected = a * b / pairs;
  const double max_index = 0.5 * (a + b);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

namespace {

Table table_for(const Clustering& pred, const LabelSet& truth) {
  return contingency_table(pred.assignments, pred.k, truth.labels, truth.class_count());
}

}  // namespace

double accuracy(const Clustering& pred, const LabelSet& truth) {
  return accuracy(table_for(pred, truth));
}
double f1_macro(const Clustering& pred, const LabelSet& truth) {
  return f1_macro(table_for(pred, truth));
}
double nmi(const Clustering& pred, const LabelSet& truth) { return nmi(table_for(pred, truth)); }
double ari(const Clustering& pred, const LabelSet& truth) { return ari(table_for(pred, truth)); }

MetricsReport evaluate(const Clustering& pred, const LabelSet& truth) {
  const Table t = table_for(pred, truth);
  MetricsReport r;
  r.acc = accuracy(t);
  r.f1 = f1_macro(t);
  r.nmi = nmi(t);
  r.ari = ari(t);
  r.unlabeled_vertices = truth.unlabeled_count();
  r.evaluated_vertices = truth.labels.size() - r.unlabeled_vertices;
  r.iterations = pred.iterations;
  r.converged = pred.converged;
  r.empty_clusters = pred.empty_clusters();
  return r;
}

nlohmann::ordered_json MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["acc"] = acc;
  j["f1"] = f1;
  j["nmi"] = nmi;
  j["ari"] = ari;
  j["runtime_seconds"] = runtime_seconds;
  j["evaluated_vertices"] = evaluated_vertices;
  j["unlabeled_vertices"] = unlabeled_vertices;
  j["parameters"] = parameters;
  j["convergence"] = {{"iterations", iterations},
                      {"converged", converged},
                      {"empty_clusters", empty_clusters}};
  return j;
}

}  // namespace hope
