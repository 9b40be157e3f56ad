#include "lexcase/run_io.hpp"

#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lexcase/error.hpp"

using nlohmann::json;

namespace lexcase::run_io {

namespace {

// Calls fn(json, where) for every nonblank line.
template <class Fn>
void for_each_json_line(const std::filesystem::path& path, Fn&& fn) {
  std::istringstream in(corpus::read_text_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = path.string() + ":" + std::to_string(lineno);
    try {
      fn(json::parse(line), where);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::parse, where + ": " + e.what());
    }
  }
}

}  // namespace

void write_run(const std::filesystem::path& path, const Run& run) {
  std::string out;
  for (const auto& [query, ids] : run) {
    out += json{{"query", query}, {"retrieved", ids}}.dump();
    out += '\n';
  }
  corpus::write_text_file(path, out);
}

Run read_run(const std::filesystem::path& path) {
  Run run;
  for_each_json_line(path, [&](const json& j, const std::string& where) {
    auto query = j.at("query").get<std::string>();
    auto ids = j.at("retrieved").get<std::vector<DocId>>();
    if (std::set<DocId>(ids.begin(), ids.end()).size() != ids.size()) {
      throw Error(ErrorCode::parse, where + ": query " + query + " retrieves an id twice");
    }
    if (!run.emplace(query, std::move(ids)).second) {
      throw Error(ErrorCode::duplicate_id, where + ": query " + query + " appears twice");
    }
  });
  return run;
}

void write_scores(const std::filesystem::path& path, const std::vector<ScoredList>& lists) {
  std::string out;
  for (const auto& list : lists) {
    json entries = json::array();
    for (const auto& e : list.entries) entries.push_back({{"id", e.doc_id}, {"score", e.score}});
    out += json{{"query", list.query_id}, {"entries", std::move(entries)}}.dump();
    out += '\n';
  }
  corpus::write_text_file(path, out);
}

std::vector<ScoredList> read_scores(const std::filesystem::path& path) {
  std::vector<ScoredList> lists;
  std::set<std::string> seen;
  for_each_json_line(path, [&](const json& j, const std::string& where) {
    ScoredList list;
    list.query_id = j.at("query").get<std::string>();
    for (const auto& e : j.at("entries")) list.entries.push_back(ScoredEntry{e.at("id").get<std::string>(), e.at("score").get<double>()});
    if (!list.has_unique_ids()) throw Error(ErrorCode::parse, where + ": duplicate document in query " + list.query_id);
    if (!seen.insert(list.query_id).second) throw Error(ErrorCode::duplicate_id, where + ": query " + list.query_id + " appears twice");
    list.sort();
    lists.push_back(std::move(list));
  });
  return lists;
}

void write_predictions(const std::filesystem::path& path, const std::map<std::string, bool>& labels,
                       const std::map<std::string, double>& probabilities) {
  std::string out;
  for (const auto& [id, label] : labels) {
    json j{{"id", id}, {"label", label ? "Y" : "N"}};
    if (auto it = probabilities.find(id); it != probabilities.end()) j["probability"] = it->second;
    out += j.dump();
    out += '\n';
  }
  corpus::write_text_file(path, out);
}

std::map<std::string, bool> read_predictions(const std::filesystem::path& path) {
  std::map<std::string, bool> out;
  for_each_json_line(path, [&](const json& j, const std::string& where) {
    const auto id = j.at("id").get<std::string>();
    const auto label = j.at("label").get<std::string>();
    if (label != "Y" && label != "N") throw Error(ErrorCode::invalid_label, where + ": label must be Y or N");
    if (!out.emplace(id, label == "Y").second) throw Error(ErrorCode::duplicate_id, where + ": id " + id + " appears twice");
  });
  return out;
}

}  // namespace lexcase::run_io
