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

#include "corefkit/conllu.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "corefkit/dep_tree.h"
#include "corefkit/validation.h"

namespace corefkit {
namespace {

constexpr const char kEntityKey[] = "Entity";
constexpr int kColumns = 10;

std::vector<std::string> Split(const std::string &s, char sep) {
  std::vector<std::string> parts;
  std::string::size_type begin = 0;
  while (true) {
    auto end = s.find(sep, begin);
    parts.push_back(s.substr(begin, end - begin));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return parts;
}

std::optional<int> ParseInt(const std::string &s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string Join(const std::vector<std::string> &parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

// One "(...", "...)" or "(...)" item of an Entity value.
struct BracketItem {
  bool opens = false;
  bool closes = false;
  std::string eid;
  int part = 0;   // k of "[k/n]", 0 when continuous
  int parts = 0;  // n of "[k/n]"
  std::vector<std::string> fields;  // after the eid: type, head, extra...
};

void ParseEid(const std::string &text, int line, BracketItem *item) {
  auto bracket = text.find('[');
  item->eid = text.substr(0, bracket);
  if (item->eid.empty()) throw ParseError(line, "empty entity id");
  if (bracket == std::string::npos) return;
  if (text.back() != ']') {
    throw ParseError(line, "malformed part marker in '" + text + "'");
  }
  const std::string marker = text.substr(bracket + 1, text.size() - bracket - 2);
  auto slash = marker.find('/');
  std::optional<int> k, n;
  if (slash != std::string::npos) {
    k = ParseInt(marker.substr(0, slash));
    n = ParseInt(marker.substr(slash + 1));
  }
  if (!k || !n || *k < 1 || *n < 1 || *k > *n) {
    throw ParseError(line, "malformed part marker in '" + text + "'");
  }
  item->part = *k;
  item->parts = *n;
}

std::vector<BracketItem> ParseEntityValue(const std::string &value,
                                          int line) {
  std::vector<BracketItem> items;
  std::size_t i = 0;
  while (i < value.size()) {
    BracketItem item;
    if (value[i] == '(') {
      std::size_t j = value.find_first_of("()", i + 1);
      if (j == std::string::npos) j = value.size();
      std::vector<std::string> fields = Split(value.substr(i + 1, j - i - 1), '-');
      ParseEid(fields[0], line, &item);
      item.fields.assign(fields.begin() + 1, fields.end());
      item.opens = true;
      if (j < value.size() && value[j] == ')') {
        item.closes = true;
        i = j + 1;
      } else {
        i = j;
      }
    } else {
      std::size_t j = value.find(')', i);
      if (j == std::string::npos) {
        throw ParseError(line, "malformed entity annotation '" + value + "'");
      }
      ParseEid(value.substr(i, j - i), line, &item);
      item.closes = true;
      i = j + 1;
    }
    items.push_back(std::move(item));
  }
  return items;
}

class Reader {
 public:
  explicit Reader(ParseReport *report) : report_(report) {}

  void Line(const std::string &raw, int lineno) {
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      FinishSentence(lineno);
      return;
    }
    if (line[0] == '#') {
      if (in_sentence_) FinishSentence(lineno);
      Comment(line, lineno);
      return;
    }
    TokenLine(line, lineno);
  }

  std::vector<Document> Finish(int lineno) {
    FinishSentence(lineno);
    FinishDoc();
    return std::move(docs_);
  }

 private:
  struct OpenMention {
    std::string entity;
    int part = 0;
    int parts = 0;
    std::vector<std::string> fields;
    std::vector<TokenId> tokens;
    int line = 0;
  };

  struct PartGroup {
    std::string entity;
    int parts = 0;
    std::vector<bool> closed;
    std::vector<std::string> fields;
    std::vector<TokenId> tokens;
    int line = 0;
  };

  struct PendingMention {
    std::string entity;
    std::vector<std::string> fields;
    std::vector<TokenId> tokens;  // may still contain empty nodes
    int line = 0;
  };

  static std::string Key(const std::string &eid, int part) {
    return part == 0 ? eid : eid + "[" + std::to_string(part) + "]";
  }

  Document &Doc(int lineno) {
    if (!doc_) StartDoc("", lineno);
    return *doc_;
  }

  void StartDoc(std::string id, int) {
    FinishDoc();
    doc_.emplace();
    doc_->doc_id = std::move(id);
  }

  void Comment(const std::string &line, int lineno) {
    std::string text = line.substr(1);
    if (!text.empty() && text[0] == ' ') text.erase(0, 1);
    if (text.rfind("newdoc", 0) == 0) {
      std::string id;
      auto eq = text.find('=');
      if (eq != std::string::npos) {
        id = text.substr(eq + 1);
        id.erase(0, id.find_first_not_of(' '));
        id.erase(id.find_last_not_of(' ') + 1);
      }
      StartDoc(id, lineno);
      return;
    }
    pending_comments_.push_back(text);
  }

  void TokenLine(const std::string &line, int lineno) {
    std::vector<std::string> cols = Split(line, '\t');
    if (static_cast<int>(cols.size()) != kColumns) {
      throw ParseError(lineno, "malformed column count: expected 10, got " +
                                   std::to_string(cols.size()));
    }
    Document &doc = Doc(lineno);
    if (!in_sentence_) {
      in_sentence_ = true;
      sentence_ = Sentence();
      sentence_.comments = std::move(pending_comments_);
      pending_comments_.clear();
      expected_word_ = 1;
    }
    const int s = static_cast<int>(doc.sentences.size());
    const std::string &id = cols[0];

    if (auto dash = id.find('-'); dash != std::string::npos) {
      auto first = ParseInt(id.substr(0, dash));
      auto last = ParseInt(id.substr(dash + 1));
      if (!first || !last || *first > *last) {
        throw ParseError(lineno, "invalid multiword token id '" + id + "'");
      }
      sentence_.multiword_tokens.push_back({*first, *last, line});
      return;
    }

    Token token;
    if (auto dot = id.find('.'); dot != std::string::npos) {
      auto word = ParseInt(id.substr(0, dot));
      auto empty = ParseInt(id.substr(dot + 1));
      if (!word || !empty || *empty < 1 || *word != expected_word_ - 1) {
        throw ParseError(lineno, "invalid empty node id '" + id + "'");
      }
      token.id = {s, *word, *empty};
    } else {
      auto word = ParseInt(id);
      if (!word || *word != expected_word_) {
        throw ParseError(lineno, "non-consecutive token id '" + id + "'");
      }
      token.id = {s, *word, 0};
      ++expected_word_;
    }
    token.form = cols[1];
    token.lemma = cols[2];
    token.upos = cols[3];
    token.xpos = cols[4];
    token.feats = cols[5];
    token.deprel = cols[7];
    token.deps = cols[8];
    if (!token.id.is_empty_node()) {
      auto head = ParseInt(cols[6]);
      if (!head || *head < 0) {
        throw ParseError(lineno, "invalid head '" + cols[6] + "'");
      }
      if (*head == token.id.word) {
        throw ParseError(lineno, "dependency self-loop");
      }
      if (*head > 0) token.parent = TokenId{s, *head, 0};
      head_lines_.push_back(lineno);
    }

    std::optional<std::string> entity_value;
    if (cols[9] != "_") {
      for (const std::string &item : Split(cols[9], '|')) {
        auto eq = item.find('=');
        MiscItem misc;
        misc.key = item.substr(0, eq);
        if (eq != std::string::npos) misc.value = item.substr(eq + 1);
        if (misc.key == kEntityKey && misc.value) {
          entity_value = misc.value;
        } else {
          token.misc.push_back(std::move(misc));
        }
      }
    }
    if (entity_value) HandleEntity(*entity_value, token.id, lineno);
    for (auto &[key, stack] : open_) {
      for (OpenMention &m : stack) {
        if (m.tokens.empty() || m.tokens.back() != token.id) {
          m.tokens.push_back(token.id);
        }
      }
    }
    sentence_.tokens.push_back(std::move(token));
  }

  void HandleEntity(const std::string &value, const TokenId &id, int lineno) {
    for (BracketItem &item : ParseEntityValue(value, lineno)) {
      const std::string key = Key(item.eid, item.part);
      if (item.opens) {
        OpenMention m;
        m.entity = item.eid;
        m.part = item.part;
        m.parts = item.parts;
        m.fields = std::move(item.fields);
        m.tokens.push_back(id);
        m.line = lineno;
        if (entity_order_.emplace(item.eid, entity_order_.size()).second) {
          entity_ids_.push_back(item.eid);
        }
        if (item.closes) {
          Closed(std::move(m), lineno);
        } else {
          open_[key].push_back(std::move(m));
        }
        continue;
      }
      auto it = open_.find(key);
      if (it == open_.end() || it->second.empty()) {
        throw ParseError(lineno, "unbalanced entity bracket: '" + key +
                                     ")' without matching open");
      }
      OpenMention m = std::move(it->second.back());
      it->second.pop_back();
      if (it->second.empty()) open_.erase(it);
      if (m.tokens.back() != id) m.tokens.push_back(id);
      Closed(std::move(m), lineno);
    }
  }

  void Closed(OpenMention m, int lineno) {
    if (m.part == 0) {
      AddMention(m.entity, std::move(m.fields), std::move(m.tokens), lineno,
                 m.line);
      return;
    }
    PartGroup *group = nullptr;
    if (m.part == 1) {
      PartGroup g;
      g.entity = m.entity;
      g.parts = m.parts;
      g.closed.assign(m.parts, false);
      g.fields = m.fields;
      g.line = m.line;
      groups_.push_back(std::move(g));
      group = &groups_.back();
    } else {
      for (auto it = groups_.rbegin(); it != groups_.rend(); ++it) {
        if (it->entity == m.entity && it->parts == m.parts &&
            !it->closed[m.part - 1]) {
          group = &*it;
          break;
        }
      }
      if (group == nullptr) {
        throw ParseError(lineno, "unbalanced entity bracket: part " +
                                     std::to_string(m.part) + "/" +
                                     std::to_string(m.parts) + " of " +
                                     m.entity + " without first part");
      }
    }
    group->closed[m.part - 1] = true;
    group->tokens.insert(group->tokens.end(), m.tokens.begin(), m.tokens.end());
    if (std::all_of(group->closed.begin(), group->closed.end(),
                    [](bool b) { return b; })) {
      PartGroup done = std::move(*group);
      groups_.erase(groups_.begin() + (group - groups_.data()));
      AddMention(done.entity, std::move(done.fields), std::move(done.tokens),
                 lineno, done.line);
    }
  }

  void AddMention(const std::string &entity, std::vector<std::string> fields,
                  std::vector<TokenId> tokens, int lineno, int open_line) {
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    if (fields.size() >= 2 && !fields[1].empty()) {
      auto head = ParseInt(fields[1]);
      if (!head) {
        throw ParseError(open_line, "invalid head index '" + fields[1] + "'");
      }
      if (*head < 1 || *head > static_cast<int>(tokens.size())) {
        throw ParseError(lineno, "head index out of mention range: " +
                                     std::to_string(*head) + " for mention of " +
                                     std::to_string(tokens.size()) +
                                     " tokens");
      }
    }
    pending_.push_back({entity, std::move(fields), std::move(tokens), lineno});
  }

  void FinishSentence(int lineno) {
    if (!in_sentence_) return;
    in_sentence_ = false;
    Document &doc = *doc_;
    const int n = sentence_.size();
    int k = 0;
    for (const Token &t : sentence_.tokens) {
      if (t.id.is_empty_node()) continue;
      if (t.parent && t.parent->word > n) {
        throw ParseError(head_lines_[k],
                         "head out of sentence range: " +
                             std::to_string(t.parent->word));
      }
      ++k;
    }
    if (auto w = FindCycle(sentence_)) {
      throw ParseError(head_lines_[*w - 1],
                       "dependency cycle through token " + std::to_string(*w));
    }
    head_lines_.clear();
    doc.sentences.push_back(std::move(sentence_));
    (void)lineno;
  }

  void FinishDoc() {
    if (!doc_) return;
    for (const auto &[key, stack] : open_) {
      if (!stack.empty()) {
        throw ParseError(stack.front().line,
                         "unbalanced entity bracket: '(" + key +
                             "' never closed");
      }
    }
    if (!groups_.empty()) {
      throw ParseError(groups_.front().line,
                       "unbalanced entity bracket: discontinuous mention of " +
                           groups_.front().entity + " is missing parts");
    }
    Document &doc = *doc_;
    std::vector<Entity> entities(entity_ids_.size());
    for (std::size_t i = 0; i < entity_ids_.size(); ++i) {
      entities[i].id = entity_ids_[i];
    }
    for (PendingMention &p : pending_) {
      Mention m;
      std::optional<TokenId> head;
      if (p.fields.size() >= 2 && !p.fields[1].empty()) {
        head = p.tokens[*ParseInt(p.fields[1]) - 1];
      }
      if (!p.fields.empty()) m.entity_type = p.fields[0];
      if (p.fields.size() > 2) m.extra.assign(p.fields.begin() + 2, p.fields.end());
      std::vector<TokenId> regular;
      for (const TokenId &id : p.tokens) {
        if (!id.is_empty_node()) regular.push_back(id);
      }
      if (regular.empty()) {
        if (report_) ++report_->empty_node_mentions_dropped;
        continue;
      }
      if (regular.size() != p.tokens.size() && report_) {
        ++report_->empty_node_mentions_trimmed;
      }
      if (!head || head->is_empty_node()) {
        try {
          head = FindHead(doc, regular);
        } catch (const std::invalid_argument &e) {
          throw ParseError(p.line, e.what());
        }
      }
      m.tokens = std::move(regular);
      m.head = *head;
      entities[entity_order_.at(p.entity)].mentions.push_back(std::move(m));
    }
    for (Entity &e : entities) {
      if (!e.mentions.empty()) doc.entities.push_back(std::move(e));
    }
    docs_.push_back(Canonicalize(std::move(doc)));
    doc_.reset();
    open_.clear();
    groups_.clear();
    pending_.clear();
    entity_order_.clear();
    entity_ids_.clear();
  }

  ParseReport *report_;
  std::vector<Document> docs_;
  std::optional<Document> doc_;
  Sentence sentence_;
  bool in_sentence_ = false;
  int expected_word_ = 1;
  std::vector<int> head_lines_;  // line of each regular token in sentence_
  std::vector<std::string> pending_comments_;

  std::map<std::string, std::vector<OpenMention>> open_;
  std::vector<PartGroup> groups_;
  std::vector<PendingMention> pending_;
  std::map<std::string, std::size_t> entity_order_;
  std::vector<std::string> entity_ids_;
};

// Bracket item positions for one contiguous run of a mention.
struct PartSpan {
  int start = 0;  // global regular-token positions
  int end = 0;
  std::string open_body;
  std::string close_key;
};

std::string Marker(int k, int n) {
  return n > 1 ? "[" + std::to_string(k) + "/" + std::to_string(n) + "]" : "";
}

std::vector<PartSpan> MentionParts(const TokenIndex &index, const Entity &e,
                                   const Mention &m) {
  std::vector<std::pair<int, int>> runs;
  for (const TokenId &id : m.tokens) {
    int pos = index.position(id);
    if (!runs.empty() && runs.back().second + 1 == pos) {
      runs.back().second = pos;
    } else {
      runs.emplace_back(pos, pos);
    }
  }
  const int head_index =
      1 + static_cast<int>(std::find(m.tokens.begin(), m.tokens.end(), m.head) -
                           m.tokens.begin());
  std::vector<std::string> fields = {m.entity_type, std::to_string(head_index)};
  fields.insert(fields.end(), m.extra.begin(), m.extra.end());
  const std::string tail = "-" + Join(fields, '-');
  const int n = static_cast<int>(runs.size());
  std::vector<PartSpan> parts;
  for (int k = 0; k < n; ++k) {
    const std::string key = e.id + Marker(k + 1, n);
    parts.push_back({runs[k].first, runs[k].second, key + tail, key});
  }
  return parts;
}

}  // namespace

ParseError::ParseError(int line, const std::string &message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line),
      message_(message) {}

InvalidDocument::InvalidDocument(std::vector<std::string> diagnostics)
    : std::runtime_error(diagnostics.empty()
                             ? std::string("invalid document")
                             : "invalid document: " + diagnostics.front()),
      diagnostics_(std::move(diagnostics)) {}

std::vector<Document> ParseConllu(std::istream &in, ParseReport *report) {
  Reader reader(report);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) reader.Line(line, ++lineno);
  return reader.Finish(lineno + 1);
}

std::vector<Document> ParseConlluString(const std::string &text,
                                        ParseReport *report) {
  std::istringstream in(text);
  return ParseConllu(in, report);
}

std::vector<Document> ReadConlluFile(const std::string &path,
                                     ParseReport *report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return ParseConllu(in, report);
  } catch (const ParseError &e) {
    throw ParseError(e.line(), path + ": " + e.message());
  }
}

std::string SerializeDocument(const Document &doc) {
  std::vector<std::string> problems;
  for (const Violation &v : ValidateDocument(doc)) {
    problems.push_back(ToString(v));
  }
  if (!problems.empty()) throw InvalidDocument(std::move(problems));

  const TokenIndex index(doc);
  // Items emitted at each regular token position.
  std::vector<std::vector<const PartSpan *>> closes(index.size());
  std::vector<std::vector<const PartSpan *>> opens(index.size());
  std::vector<std::vector<PartSpan>> all_parts;
  for (const Entity &e : doc.entities) {
    std::vector<PartSpan> entity_parts;
    for (const Mention &m : e.mentions) {
      for (PartSpan &p : MentionParts(index, e, m)) {
        entity_parts.push_back(std::move(p));
      }
    }
    // Closing brackets pop the latest open item with the same key, so two
    // crossing runs with one key cannot be written unambiguously.
    for (const PartSpan &a : entity_parts) {
      for (const PartSpan &b : entity_parts) {
        if (a.close_key == b.close_key && a.start < b.start &&
            b.start <= a.end && a.end < b.end) {
          throw InvalidDocument(
              {"crossing mentions of one entity: " + e.id});
        }
      }
    }
    all_parts.push_back(std::move(entity_parts));
  }
  for (const auto &entity_parts : all_parts) {
    for (const PartSpan &p : entity_parts) {
      opens[p.start].push_back(&p);
      if (p.end != p.start) closes[p.end].push_back(&p);
    }
  }
  auto entity_value = [&](int pos) {
    auto &c = closes[pos];
    std::stable_sort(c.begin(), c.end(), [](const PartSpan *a, const PartSpan *b) {
      return a->start > b->start;
    });
    auto &o = opens[pos];
    std::stable_sort(o.begin(), o.end(), [](const PartSpan *a, const PartSpan *b) {
      return a->end > b->end;
    });
    std::string value;
    for (const PartSpan *p : c) value += p->close_key + ")";
    for (const PartSpan *p : o) {
      value += "(" + p->open_body;
      if (p->end == p->start) value += ")";
    }
    return value;
  };

  std::ostringstream out;
  out << "# newdoc";
  if (!doc.doc_id.empty()) out << " id = " << doc.doc_id;
  out << "\n";
  int pos = 0;
  for (const Sentence &s : doc.sentences) {
    for (const std::string &c : s.comments) out << "# " << c << "\n";
    std::size_t mwt = 0;
    for (const Token &t : s.tokens) {
      if (!t.id.is_empty_node()) {
        while (mwt < s.multiword_tokens.size() &&
               s.multiword_tokens[mwt].first <= t.id.word) {
          out << s.multiword_tokens[mwt++].line << "\n";
        }
      }
      std::vector<std::string> misc;
      for (const MiscItem &m : t.misc) {
        misc.push_back(m.value ? m.key + "=" + *m.value : m.key);
      }
      std::string head;
      if (t.id.is_empty_node()) {
        out << t.id.word << "." << t.id.empty;
        head = "_";
      } else {
        out << t.id.word;
        head = t.parent ? std::to_string(t.parent->word) : "0";
        const std::string value = entity_value(pos++);
        if (!value.empty()) misc.push_back(std::string(kEntityKey) + "=" + value);
      }
      out << "\t" << t.form << "\t" << t.lemma << "\t" << t.upos << "\t"
          << t.xpos << "\t" << t.feats << "\t" << head << "\t" << t.deprel
          << "\t" << t.deps << "\t" << (misc.empty() ? "_" : Join(misc, '|'))
          << "\n";
    }
    for (; mwt < s.multiword_tokens.size(); ++mwt) {
      out << s.multiword_tokens[mwt].line << "\n";
    }
    out << "\n";
  }
  return out.str();
}

std::string SerializeCorpus(const std::vector<Document> &docs) {
  std::string out;
  for (const Document &d : docs) out += SerializeDocument(d);
  return out;
}

void WriteConlluFile(const std::string &path,
                     const std::vector<Document> &docs) {
  const std::string text = SerializeCorpus(docs);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace corefkit
