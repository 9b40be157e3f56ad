#include "lexcase/corpus_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "lexcase/error.hpp"
#include "lexcase/utf8.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace lexcase::corpus {

namespace {

std::string trim(const std::string& s) {
  const auto* ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

void check_utf8(const std::string& text, const fs::path& path) {
  if (auto bad = utf8::first_invalid(text)) {
    throw Error(ErrorCode::encoding,
                path.string() + ": invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
}

std::vector<fs::path> sorted_entries(const fs::path& dir, bool want_dirs) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.empty() || name.front() == '.') continue;
    if (want_dirs ? entry.is_directory() : entry.is_regular_file()) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<DocId> read_gold(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, path.string() + ": " + e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::parse, path.string() + ": expected a JSON array of ids");
  std::set<DocId> gold;
  for (const auto& item : j) {
    if (!item.is_string()) throw Error(ErrorCode::parse, path.string() + ": gold ids must be strings");
    gold.insert(item.get<std::string>());
  }
  return gold;
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  check_utf8(text, path);
  return text;
}

void write_text_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

std::vector<QueryCase> load_case_queries(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorCode::io, root.string() + " is not a directory");
  std::vector<QueryCase> queries;
  for (const auto& dir : sorted_entries(root, true)) {
    QueryCase q;
    q.id = dir.filename().string();
    const auto base_path = dir / "base.txt";
    if (!fs::is_regular_file(base_path)) {
      throw Error(ErrorCode::malformed_query, dir.string() + ": missing base.txt");
    }
    q.base = Document{q.id, read_text_file(base_path), {}};

    const auto cand_dir = dir / "candidates";
    const bool has_pool = fs::is_directory(cand_dir);
    if (has_pool) {
      std::set<DocId> seen;
      for (const auto& file : sorted_entries(cand_dir, false)) {
        if (file.extension() != ".txt") continue;
        auto id = file.stem().string();
        if (!seen.insert(id).second) {
          throw Error(ErrorCode::duplicate_id, dir.string() + ": duplicate candidate id " + id);
        }
        q.candidates.push_back(Document{std::move(id), read_text_file(file), {}});
      }
    }

    const auto gold_path = dir / "gold.json";
    if (fs::is_regular_file(gold_path)) {
      auto gold = read_gold(gold_path);
      if (has_pool) {
        for (const auto& g : gold) {
          const bool found = std::any_of(q.candidates.begin(), q.candidates.end(),
                                         [&](const Document& d) { return d.id == g; });
          if (!found) {
            throw Error(ErrorCode::gold_mismatch,
                        dir.string() + ": gold id " + g + " is not among the candidates");
          }
        }
      }
      q.gold = std::move(gold);
    }
    queries.push_back(std::move(q));
  }
  return queries;
}

std::map<DocId, std::set<DocId>> load_gold(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorCode::io, root.string() + " is not a directory");
  std::map<DocId, std::set<DocId>> out;
  for (const auto& dir : sorted_entries(root, true)) {
    const auto gold_path = dir / "gold.json";
    if (fs::is_regular_file(gold_path)) out.emplace(dir.filename().string(), read_gold(gold_path));
  }
  return out;
}

std::vector<Document> load_articles(const fs::path& path) {
  const std::string content = read_text_file(path);
  std::istringstream in(content);
  std::vector<Document> docs;
  std::set<DocId> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto where = path.string() + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::parse, where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("text") ||
        !j["text"].is_string()) {
      throw Error(ErrorCode::parse, where + ": expected string fields \"id\" and \"text\"");
    }
    Document doc{j["id"].get<std::string>(), j["text"].get<std::string>(), {}};
    if (doc.id.empty()) throw Error(ErrorCode::parse, where + ": empty id");
    if (!seen.insert(doc.id).second) throw Error(ErrorCode::duplicate_id, where + ": duplicate id " + doc.id);
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<EntailPair> load_pairs(const fs::path& path) {
  namespace pt = boost::property_tree;
  const std::string content = read_text_file(path);
  std::istringstream in(content);
  pt::ptree tree;
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::parse, path.string() + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  std::vector<EntailPair> pairs;
  std::set<DocId> seen;
  for (const auto& [root_name, root] : tree) {
    if (root_name == "<xmlcomment>") continue;
    for (const auto& [name, node] : root) {
      if (name != "pair") continue;
      const auto id = node.get_optional<std::string>("<xmlattr>.id");
      if (!id || id->empty()) throw Error(ErrorCode::parse, path.string() + ": <pair> without id attribute");
      const auto where = path.string() + ": pair " + *id;
      const auto t1 = node.get_child_optional("t1");
      const auto t2 = node.get_child_optional("t2");
      if (!t1) throw Error(ErrorCode::parse, where + ": missing <t1>");
      if (!t2) throw Error(ErrorCode::parse, where + ": missing <t2>");
      if (!seen.insert(*id).second) throw Error(ErrorCode::duplicate_id, where + ": duplicate pair id");

      EntailPair p;
      p.id = *id;
      p.t1 = Document{*id + "/t1", trim(t1->data()), {}};
      p.t2 = Document{*id + "/t2", trim(t2->data()), {}};
      if (const auto label = node.get_optional<std::string>("<xmlattr>.label")) {
        if (*label == "Y") {
          p.label = true;
        } else if (*label == "N") {
          p.label = false;
        } else {
          throw Error(ErrorCode::invalid_label, where + ": label \"" + *label + "\" is not Y or N");
        }
      }
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

void write_case_queries(const fs::path& root, const std::vector<QueryCase>& queries) {
  fs::create_directories(root);
  for (const auto& q : queries) {
    const auto dir = root / q.id;
    write_text_file(dir / "base.txt", q.base.text);
    if (!q.candidates.empty()) fs::create_directories(dir / "candidates");
    for (const auto& c : q.candidates) write_text_file(dir / "candidates" / (c.id + ".txt"), c.text);
    if (q.gold) {
      json arr = json::array();
      for (const auto& g : *q.gold) arr.push_back(g);
      write_text_file(dir / "gold.json", arr.dump() + "\n");
    }
  }
}

void write_articles(const fs::path& path, const std::vector<Document>& docs) {
  std::string out;
  for (const auto& d : docs) {
    out += json{{"id", d.id}, {"text", d.text}}.dump();
    out += '\n';
  }
  write_text_file(path, out);
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_pairs(const fs::path& path, const std::vector<EntailPair>& pairs) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<pairs>\n";
  for (const auto& p : pairs) {
    out += "<pair id=\"" + xml_escape(p.id) + "\"";
    if (p.label) out += std::string(" label=\"") + (*p.label ? "Y" : "N") + "\"";
    out += ">\n<t1>\n" + xml_escape(p.t1.text) + "\n</t1>\n<t2>\n" + xml_escape(p.t2.text) + "\n</t2>\n</pair>\n";
  }
  out += "</pairs>\n";
  write_text_file(path, out);
}

}  // namespace lexcase::corpus
