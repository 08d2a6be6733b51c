// Copyright 2026 The corefkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "corefkit/scorer.h"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "corefkit/hungarian.h"

namespace corefkit {
namespace {

Rational Ratio(const Rational &num, const Rational &den) {
  return den == 0 ? Rational(0) : Rational(num / den);
}

const Mention &At(std::span<const Entity> entities, const MentionRef &r) {
  return entities[r.entity].mentions[r.mention];
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void Union(int a, int b) { parent_[Find(a)] = Find(b); }

 private:
  std::vector<int> parent_;
};

std::vector<MentionRef> Flatten(std::span<const Entity> entities) {
  std::vector<MentionRef> refs;
  for (int e = 0; e < static_cast<int>(entities.size()); ++e) {
    for (int m = 0; m < static_cast<int>(entities[e].mentions.size()); ++m) {
      refs.push_back({e, m});
    }
  }
  // Canonical order keeps the matching independent of entity order.
  std::stable_sort(refs.begin(), refs.end(),
                   [&](const MentionRef &a, const MentionRef &b) {
                     const Mention &ma = At(entities, a);
                     const Mention &mb = At(entities, b);
                     if (ma.tokens != mb.tokens) return ma.tokens < mb.tokens;
                     return ma.head < mb.head;
                   });
  return refs;
}

// Number of parts `cluster` is split into by `other`; ids absent from
// `other` count as parts of their own.
std::int64_t Partitions(const std::vector<int> &cluster,
                        const std::map<int, int> &other_of) {
  std::set<int> parts;
  std::int64_t loose = 0;
  for (int id : cluster) {
    auto it = other_of.find(id);
    if (it == other_of.end()) {
      ++loose;
    } else {
      parts.insert(it->second);
    }
  }
  return loose + static_cast<std::int64_t>(parts.size());
}

std::map<int, int> ClusterOf(const Clustering &c) {
  std::map<int, int> of;
  for (int i = 0; i < static_cast<int>(c.size()); ++i) {
    for (int id : c[i]) of[id] = i;
  }
  return of;
}

std::int64_t Overlap(const std::vector<int> &a, const std::vector<int> &b) {
  std::vector<int> sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::vector<int> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(common));
  return static_cast<std::int64_t>(common.size());
}

// Sum over pairs of |K n R|^2 / |K| for the B-cubed numerators.
Rational BCubedNumerator(const Clustering &key, const Clustering &response) {
  const std::map<int, int> response_of = ClusterOf(response);
  Rational total = 0;
  for (const auto &k : key) {
    std::map<int, std::int64_t> overlap;
    for (int id : k) {
      auto it = response_of.find(id);
      if (it != response_of.end()) ++overlap[it->second];
    }
    for (const auto &[r, n] : overlap) {
      total += Rational(n * n, static_cast<std::int64_t>(k.size()));
    }
  }
  return total;
}

std::string ToText(const Rational &r) {
  std::ostringstream out;
  out << boost::multiprecision::numerator(r);
  if (boost::multiprecision::denominator(r) != 1) {
    out << "/" << boost::multiprecision::denominator(r);
  }
  return out.str();
}

Rational FromText(const std::string &text) {
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos) {
      return Rational(boost::multiprecision::cpp_int(text));
    }
    boost::multiprecision::cpp_int num(text.substr(0, slash));
    boost::multiprecision::cpp_int den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error &) {
    throw std::invalid_argument("bad rational '" + text + "'");
  }
}

}  // namespace

std::vector<Entity> FilterSingletons(std::span<const Entity> entities) {
  std::vector<Entity> out;
  for (const Entity &e : entities) {
    if (e.mentions.size() >= 2) out.push_back(e);
  }
  return out;
}

bool Admissible(const Mention &gold, const Mention &sys) {
  std::vector<TokenId> g = gold.tokens, s = sys.tokens;
  std::sort(g.begin(), g.end());
  std::sort(s.begin(), s.end());
  return !s.empty() && std::includes(g.begin(), g.end(), s.begin(), s.end()) &&
         std::binary_search(s.begin(), s.end(), gold.head);
}

MentionAlignment AlignMentions(std::span<const Entity> gold,
                               std::span<const Entity> sys) {
  const std::vector<MentionRef> g = Flatten(gold);
  const std::vector<MentionRef> s = Flatten(sys);
  const int ng = static_cast<int>(g.size());
  const int ns = static_cast<int>(s.size());

  // Candidate edges; a system mention must contain the gold head, so only
  // system mentions covering that token are tried.
  std::map<TokenId, std::vector<int>> sys_by_token;
  for (int j = 0; j < ns; ++j) {
    for (const TokenId &t : At(sys, s[j]).tokens) sys_by_token[t].push_back(j);
  }
  std::vector<std::vector<int>> edges(ng);
  UnionFind components(ng + ns);
  for (int i = 0; i < ng; ++i) {
    const Mention &gm = At(gold, g[i]);
    auto it = sys_by_token.find(gm.head);
    if (it == sys_by_token.end()) continue;
    for (int j : it->second) {
      if (Admissible(gm, At(sys, s[j]))) {
        edges[i].push_back(j);
        components.Union(i, ng + j);
      }
    }
  }

  std::map<int, std::pair<std::vector<int>, std::vector<int>>> groups;
  for (int i = 0; i < ng; ++i) {
    if (!edges[i].empty()) groups[components.Find(i)].first.push_back(i);
  }
  for (int j = 0; j < ns; ++j) {
    auto it = groups.find(components.Find(ng + j));
    if (it != groups.end()) it->second.second.push_back(j);
  }

  std::vector<int> sys_match(ns, -1), gold_match(ng, -1);
  for (const auto &[root, members] : groups) {
    const auto &[rows, cols] = members;
    // Lexicographic preference packed into one integer weight: pair count,
    // then exact matches, then system mention size.
    std::int64_t max_size = 1;
    for (int j : cols) {
      max_size = std::max<std::int64_t>(max_size, At(sys, s[j]).tokens.size());
    }
    const std::int64_t n = static_cast<std::int64_t>(rows.size());
    const std::int64_t exact_w = n * max_size + 1;
    const std::int64_t pair_w = n * (exact_w + max_size) + 1;
    std::map<int, int> col_of;
    for (int c = 0; c < static_cast<int>(cols.size()); ++c) col_of[cols[c]] = c;
    std::vector<std::vector<std::int64_t>> w(
        rows.size(), std::vector<std::int64_t>(cols.size(), 0));
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      const Mention &gm = At(gold, g[rows[r]]);
      for (int j : edges[rows[r]]) {
        const Mention &sm = At(sys, s[j]);
        const bool exact = sm.tokens == gm.tokens;
        w[r][col_of[j]] = pair_w + (exact ? exact_w : 0) +
                          static_cast<std::int64_t>(sm.tokens.size());
      }
    }
    // Remaining ties go to the earliest mentions in document order.
    const std::vector<int> assignment = LexFirstMaxWeightAssignment(w);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      const int c = assignment[r];
      if (c < 0 || w[r][c] == 0) continue;
      gold_match[rows[r]] = cols[c];
      sys_match[cols[c]] = rows[r];
    }
  }

  MentionAlignment out;
  for (int i = 0; i < ng; ++i) {
    if (gold_match[i] >= 0) {
      out.pairs.push_back({g[i], s[gold_match[i]]});
    } else {
      out.unmatched_gold.push_back(g[i]);
    }
  }
  for (int j = 0; j < ns; ++j) {
    if (sys_match[j] < 0) out.unmatched_sys.push_back(s[j]);
  }
  return out;
}

Rational MetricScore::recall() const { return Ratio(recall_num, recall_den); }

Rational MetricScore::precision() const {
  return Ratio(precision_num, precision_den);
}

Rational MetricScore::f1() const {
  const Rational r = recall();
  const Rational p = precision();
  if (r + p == 0) return 0;
  return 2 * p * r / (p + r);
}

MetricScore &MetricScore::operator+=(const MetricScore &o) {
  recall_num += o.recall_num;
  recall_den += o.recall_den;
  precision_num += o.precision_num;
  precision_den += o.precision_den;
  return *this;
}

Rational EvalReport::conll_f1() const {
  return (muc.f1() + b3.f1() + ceaf_e.f1()) / 3;
}

EvalReport &EvalReport::operator+=(const EvalReport &o) {
  muc += o.muc;
  b3 += o.b3;
  ceaf_e += o.ceaf_e;
  return *this;
}

MetricScore Muc(const Clustering &key, const Clustering &response) {
  const std::map<int, int> key_of = ClusterOf(key);
  const std::map<int, int> response_of = ClusterOf(response);
  MetricScore m;
  for (const auto &k : key) {
    const auto size = static_cast<std::int64_t>(k.size());
    m.recall_num += size - Partitions(k, response_of);
    m.recall_den += size - 1;
  }
  for (const auto &r : response) {
    const auto size = static_cast<std::int64_t>(r.size());
    m.precision_num += size - Partitions(r, key_of);
    m.precision_den += size - 1;
  }
  return m;
}

MetricScore BCubed(const Clustering &key, const Clustering &response) {
  MetricScore m;
  m.recall_num = BCubedNumerator(key, response);
  m.precision_num = BCubedNumerator(response, key);
  for (const auto &k : key) m.recall_den += static_cast<std::int64_t>(k.size());
  for (const auto &r : response) {
    m.precision_den += static_cast<std::int64_t>(r.size());
  }
  return m;
}

MetricScore CeafE(const Clustering &key, const Clustering &response) {
  MetricScore m;
  m.recall_den = static_cast<std::int64_t>(key.size());
  m.precision_den = static_cast<std::int64_t>(response.size());
  if (key.empty() || response.empty()) return m;
  std::vector<std::vector<Rational>> phi(key.size(),
                                         std::vector<Rational>(response.size()));
  std::vector<std::vector<double>> weight(key.size(),
                                          std::vector<double>(response.size()));
  for (std::size_t i = 0; i < key.size(); ++i) {
    for (std::size_t j = 0; j < response.size(); ++j) {
      const std::int64_t common = Overlap(key[i], response[j]);
      phi[i][j] = Rational(2 * common, static_cast<std::int64_t>(
                                           key[i].size() + response[j].size()));
      weight[i][j] = phi[i][j].convert_to<double>();
    }
  }
  const std::vector<int> assignment = MaxWeightAssignment(weight);
  Rational similarity = 0;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (assignment[i] >= 0) similarity += phi[i][assignment[i]];
  }
  m.recall_num = similarity;
  m.precision_num = similarity;
  return m;
}

EvalReport ScoreClusterings(const Clustering &key, const Clustering &response) {
  return {Muc(key, response), BCubed(key, response), CeafE(key, response)};
}

EvalReport Evaluate(std::span<const Entity> gold_in,
                    std::span<const Entity> sys_in, bool keep_singletons) {
  std::vector<Entity> gold_kept, sys_kept;
  std::span<const Entity> gold = gold_in, sys = sys_in;
  if (!keep_singletons) {
    gold_kept = FilterSingletons(gold_in);
    sys_kept = FilterSingletons(sys_in);
    gold = gold_kept;
    sys = sys_kept;
  }
  const MentionAlignment alignment = AlignMentions(gold, sys);

  std::map<MentionRef, int> gold_id, sys_id;
  int next = 0;
  for (int e = 0; e < static_cast<int>(gold.size()); ++e) {
    for (int m = 0; m < static_cast<int>(gold[e].mentions.size()); ++m) {
      gold_id[{e, m}] = next++;
    }
  }
  for (const auto &[g, s] : alignment.pairs) sys_id[s] = gold_id.at(g);
  for (const MentionRef &s : alignment.unmatched_sys) sys_id[s] = next++;

  Clustering key(gold.size()), response(sys.size());
  for (const auto &[ref, id] : gold_id) key[ref.entity].push_back(id);
  for (const auto &[ref, id] : sys_id) response[ref.entity].push_back(id);
  return ScoreClusterings(key, response);
}

EvalReport Evaluate(const Document &gold, const Document &sys,
                    bool keep_singletons) {
  for (const Entity &e : sys.entities) {
    for (const Mention &m : e.mentions) {
      for (const TokenId &t : m.tokens) {
        if (gold.FindToken(t) == nullptr) {
          throw std::invalid_argument("system mention of " + e.id +
                                      " references unknown token " +
                                      ToString(t));
        }
      }
    }
  }
  return Evaluate(gold.entities, sys.entities, keep_singletons);
}

EvalReport EvaluateCorpus(std::span<const Document> gold,
                          std::span<const Document> sys,
                          bool keep_singletons) {
  if (gold.size() != sys.size()) {
    throw std::invalid_argument(
        "document count mismatch: gold " + std::to_string(gold.size()) +
        ", system " + std::to_string(sys.size()));
  }
  EvalReport total;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].doc_id != sys[i].doc_id) {
      throw std::invalid_argument("document id mismatch: '" + gold[i].doc_id +
                                  "' vs '" + sys[i].doc_id + "'");
    }
    total += Evaluate(gold[i], sys[i], keep_singletons);
  }
  return total;
}

std::string FormatPercent2(const Rational &value) {
  using boost::multiprecision::cpp_int;
  // floor(value * 10000 + 1/2), exact.
  const Rational scaled = value * 10000 + Rational(1, 2);
  cpp_int hundredths = boost::multiprecision::numerator(scaled) /
                       boost::multiprecision::denominator(scaled);
  if (scaled < 0 && hundredths * boost::multiprecision::denominator(scaled) !=
                        boost::multiprecision::numerator(scaled)) {
    hundredths -= 1;
  }
  const bool negative = hundredths < 0;
  if (negative) hundredths = -hundredths;
  const cpp_int whole = hundredths / 100;
  const int frac = static_cast<int>(hundredths % 100);
  std::ostringstream out;
  if (negative) out << "-";
  out << whole << "." << (frac < 10 ? "0" : "") << frac;
  return out.str();
}

std::string FormatReportTable(const EvalReport &report) {
  std::ostringstream out;
  auto row = [&](const char *name, const MetricScore &m) {
    out << name << "\t" << FormatPercent2(m.recall()) << "\t"
        << FormatPercent2(m.precision()) << "\t" << FormatPercent2(m.f1())
        << "\n";
  };
  out << "metric\trecall\tprecision\tf1\n";
  row("MUC", report.muc);
  row("B3", report.b3);
  row("CEAF-e", report.ceaf_e);
  out << "CoNLL F1\t" << FormatPercent2(report.conll_f1()) << "\n";
  return out.str();
}

std::string FormatReportMachine(const EvalReport &report) {
  std::ostringstream out;
  auto block = [&](const char *name, const MetricScore &m) {
    out << name << ".recall_num=" << ToText(m.recall_num) << "\n"
        << name << ".recall_den=" << ToText(m.recall_den) << "\n"
        << name << ".precision_num=" << ToText(m.precision_num) << "\n"
        << name << ".precision_den=" << ToText(m.precision_den) << "\n"
        << name << ".f1=" << ToText(m.f1()) << "\n";
  };
  block("muc", report.muc);
  block("b3", report.b3);
  block("ceaf_e", report.ceaf_e);
  out << "conll_f1=" << ToText(report.conll_f1()) << "\n";
  return out.str();
}

EvalReport ParseReportMachine(const std::string &text) {
  std::map<std::string, Rational> values;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("bad report line '" + line + "'");
    }
    values[line.substr(0, eq)] = FromText(line.substr(eq + 1));
  }
  auto get = [&](const std::string &key) {
    auto it = values.find(key);
    if (it == values.end()) throw std::invalid_argument("missing " + key);
    return it->second;
  };
  auto metric = [&](const std::string &name) {
    MetricScore m;
    m.recall_num = get(name + ".recall_num");
    m.recall_den = get(name + ".recall_den");
    m.precision_num = get(name + ".precision_num");
    m.precision_den = get(name + ".precision_den");
    if (m.f1() != get(name + ".f1")) {
      throw std::invalid_argument(name + ".f1 disagrees with its counts");
    }
    return m;
  };
  EvalReport report{metric("muc"), metric("b3"), metric("ceaf_e")};
  if (report.conll_f1() != get("conll_f1")) {
    throw std::invalid_argument("conll_f1 disagrees with the metric rows");
  }
  return report;
}

}  // namespace corefkit
