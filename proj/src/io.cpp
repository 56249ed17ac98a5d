#include "selmer/io.hpp"

#include <charconv>
#include <fstream>

#include "json.hpp"

namespace selmer {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string join_codes(const std::vector<uint64_t>& codes) {
  std::string out;
  for (size_t i = 0; i < codes.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(codes[i]);
  }
  return out;
}

template <typename T>
bool parse_int(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

ordered_json record_fields(const ScanRecord& r) {
  ordered_json j;
  j["n"] = r.n;
  j["h"] = r.h;
  j["omega"] = r.omega;
  j["count"] = r.count;
  if (r.s)
    j["s"] = *r.s;
  else
    j["s"] = nullptr;
  j["parity_expected"] = r.parity_expected_even ? "even" : "odd";
  if (r.parity_match)
    j["parity_match"] = *r.parity_match;
  else
    j["parity_match"] = nullptr;
  j["anomaly"] = r.anomaly;
  j["passing_codes"] = r.passing;
  return j;
}

std::optional<ScanRecord> record_from_fields(const ordered_json& j) {
  ScanRecord r;
  r.n = j.at("n").get<uint64_t>();
  r.h = j.at("h").get<int>();
  r.omega = j.at("omega").get<int>();
  r.count = j.at("count").get<uint64_t>();
  if (!j.at("s").is_null()) r.s = j.at("s").get<int>();
  std::string pe = j.at("parity_expected").get<std::string>();
  if (pe != "even" && pe != "odd") return std::nullopt;
  r.parity_expected_even = pe == "even";
  if (!j.at("parity_match").is_null())
    r.parity_match = j.at("parity_match").get<bool>();
  if (r.parity_match.has_value() != r.s.has_value()) return std::nullopt;
  r.anomaly = static_cast<uint8_t>(j.at("anomaly").get<unsigned>());
  r.passing = j.at("passing_codes").get<std::vector<uint64_t>>();
  return r;
}

}  // namespace

std::string csv_header() {
  return "n,h,omega,count,s,parity_expected,parity_match,anomaly,"
         "passing_codes";
}

std::string to_csv_line(const ScanRecord& r) {
  std::string out = std::to_string(r.n);
  out += ',';
  out += std::to_string(r.h);
  out += ',';
  out += std::to_string(r.omega);
  out += ',';
  out += std::to_string(r.count);
  out += ',';
  if (r.s) out += std::to_string(*r.s);
  out += ',';
  out += r.parity_expected_even ? "even" : "odd";
  out += ',';
  if (r.parity_match) out += *r.parity_match ? "1" : "0";
  out += ',';
  out += std::to_string(r.anomaly);
  out += ',';
  out += join_codes(r.passing);
  return out;
}

std::optional<ScanRecord> from_csv_line(std::string_view line) {
  std::array<std::string_view, 9> field;
  size_t start = 0;
  for (int i = 0; i < 9; ++i) {
    size_t comma = line.find(',', start);
    bool last = i == 8;
    if (last != (comma == std::string_view::npos)) return std::nullopt;
    field[i] = last ? line.substr(start) : line.substr(start, comma - start);
    start = comma + 1;
  }
  ScanRecord r;
  int anomaly = 0;
  if (!parse_int(field[0], r.n) || !parse_int(field[1], r.h) ||
      !parse_int(field[2], r.omega) || !parse_int(field[3], r.count) ||
      !parse_int(field[7], anomaly))
    return std::nullopt;
  r.anomaly = static_cast<uint8_t>(anomaly);
  if (!field[4].empty()) {
    int s = 0;
    if (!parse_int(field[4], s)) return std::nullopt;
    r.s = s;
  }
  if (field[5] == "even")
    r.parity_expected_even = true;
  else if (field[5] == "odd")
    r.parity_expected_even = false;
  else
    return std::nullopt;
  if (!field[6].empty()) {
    if (field[6] != "0" && field[6] != "1") return std::nullopt;
    r.parity_match = field[6] == "1";
  }
  if (r.parity_match.has_value() != r.s.has_value()) return std::nullopt;
  if (!field[8].empty()) {
    size_t pos = 0;
    while (pos <= field[8].size()) {
      size_t semi = field[8].find(';', pos);
      std::string_view code = semi == std::string_view::npos
                                  ? field[8].substr(pos)
                                  : field[8].substr(pos, semi - pos);
      uint64_t c = 0;
      if (!parse_int(code, c)) return std::nullopt;
      r.passing.push_back(c);
      if (semi == std::string_view::npos) break;
      pos = semi + 1;
    }
  }
  return r;
}

std::string to_jsonl_line(const ScanRecord& r) {
  return record_fields(r).dump();
}

std::optional<ScanRecord> from_jsonl_line(std::string_view line) {
  ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  try {
    return record_from_fields(j);
  } catch (const ordered_json::exception&) {
    return std::nullopt;
  }
}

namespace {

const char* equivalence_tag(EquivalenceStatus e) {
  switch (e) {
    case EquivalenceStatus::kPassed: return "pass";
    case EquivalenceStatus::kFailed: return "fail";
    case EquivalenceStatus::kSkipped: return "skip";
    case EquivalenceStatus::kNotSampled: break;
  }
  return "none";
}

std::optional<EquivalenceStatus> equivalence_from_tag(const std::string& s) {
  if (s == "pass") return EquivalenceStatus::kPassed;
  if (s == "fail") return EquivalenceStatus::kFailed;
  if (s == "skip") return EquivalenceStatus::kSkipped;
  if (s == "none") return EquivalenceStatus::kNotSampled;
  return std::nullopt;
}

}  // namespace

std::string to_cache_line(const ScanRecord& r) {
  ordered_json j;
  j["schema"] = kCacheSchemaVersion;
  j.update(record_fields(r));
  j["equivalence"] = equivalence_tag(r.equivalence);
  return j.dump();
}

std::optional<ScanRecord> from_cache_line(std::string_view line) {
  ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  try {
    if (j.at("schema").get<int>() != kCacheSchemaVersion) return std::nullopt;
    auto r = record_from_fields(j);
    if (!r) return std::nullopt;
    auto eq = equivalence_from_tag(j.at("equivalence").get<std::string>());
    if (!eq) return std::nullopt;
    r->equivalence = *eq;
    return r;
  } catch (const ordered_json::exception&) {
    return std::nullopt;
  }
}

CacheLoadResult load_cache_file(const std::string& path, int h) {
  CacheLoadResult out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto r = from_cache_line(line);
    if (!r) {
      ++out.corrupt_lines;
      continue;
    }
    if (r->h != h) {
      ++out.foreign_lines;
      continue;
    }
    out.records[r->n] = std::move(*r);  // last write wins
  }
  return out;
}

}  // namespace selmer
