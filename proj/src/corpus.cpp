#include "pkv/corpus.hpp"

#include <chrono>
#include <cstdio>
#include <istream>

#include "json.hpp"

namespace pkv {
namespace {

using nlohmann::json;

unsigned parse_digits(std::string_view s) {
  unsigned v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw Error(ErrorCode::BadDate, std::string(s));
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  return v;
}

const json& required(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) throw Error(ErrorCode::MissingField, name);
  return *it;
}

std::vector<std::string> string_list(const json& value, const char* name, bool allow_empty_items) {
  if (!value.is_array()) throw Error(ErrorCode::MalformedJson, std::string(name) + " must be an array");
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_string()) {
      throw Error(ErrorCode::MalformedJson, std::string(name) + " must contain strings");
    }
    auto s = item.get<std::string>();
    if (s.empty() && !allow_empty_items) {
      throw Error(ErrorCode::MalformedJson, std::string(name) + " contains an empty string");
    }
    out.push_back(std::move(s));
  }
  return out;
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

Date Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw Error(ErrorCode::BadDate, std::string(text));
  }
  Date d;
  d.year = static_cast<int>(parse_digits(text.substr(0, 4)));
  d.month = parse_digits(text.substr(5, 2));
  d.day = parse_digits(text.substr(8, 2));
  const std::chrono::year_month_day ymd{std::chrono::year{d.year}, std::chrono::month{d.month},
                                        std::chrono::day{d.day}};
  if (!ymd.ok() || d.year < 1800 || d.year > 2100) throw Error(ErrorCode::BadDate, std::string(text));
  return d;
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
  return buf;
}

PatentRecord parse_patent_record(std::string_view line) {
  json obj = json::parse(line.begin(), line.end(), nullptr, false);
  if (obj.is_discarded()) throw Error(ErrorCode::MalformedJson, "not valid JSON");
  if (!obj.is_object()) throw Error(ErrorCode::MalformedJson, "record must be a JSON object");

  PatentRecord rec;
  const auto& id = required(obj, "patent_id");
  if (!id.is_string() || id.get_ref<const std::string&>().empty()) {
    throw Error(ErrorCode::MalformedJson, "patent_id must be a nonempty string");
  }
  rec.patent_id = id.get<std::string>();

  const auto& abstract = required(obj, "abstract");
  if (!abstract.is_string()) throw Error(ErrorCode::MalformedJson, "abstract must be a string");
  rec.abstract = abstract.get<std::string>();
  if (is_blank(rec.abstract)) throw Error(ErrorCode::EmptyAbstract, rec.patent_id);

  rec.cpc_codes = string_list(required(obj, "cpc"), "cpc", true);
  std::erase_if(rec.cpc_codes, [](const std::string& s) { return is_blank(s); });
  if (rec.cpc_codes.empty()) throw Error(ErrorCode::NoCpcCodes, rec.patent_id);

  const auto& date = required(obj, "date");
  if (!date.is_string()) throw Error(ErrorCode::BadDate, "date must be a string");
  rec.application_date = Date::parse(date.get_ref<const std::string&>());

  if (auto it = obj.find("applicants"); it != obj.end() && !it->is_null()) {
    rec.applicants = string_list(*it, "applicants", false);
  }
  if (auto it = obj.find("inventors"); it != obj.end() && !it->is_null()) {
    rec.inventors = string_list(*it, "inventors", false);
  }
  return rec;
}

std::string serialize_patent_record(const PatentRecord& record) {
  json obj;
  obj["patent_id"] = record.patent_id;
  obj["abstract"] = record.abstract;
  obj["cpc"] = record.cpc_codes;
  obj["date"] = record.application_date.to_string();
  obj["applicants"] = record.applicants;
  obj["inventors"] = record.inventors;
  return obj.dump();
}

CorpusReader::CorpusReader(const std::filesystem::path& path) : source_(path.string()) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec) || std::filesystem::is_directory(path, ec)) {
    throw Error(ErrorCode::FileNotFound, source_);
  }
  owned_ = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*owned_) throw Error(ErrorCode::IoFailure, "cannot open " + source_);
  in_ = owned_.get();
}

CorpusReader::CorpusReader(std::istream& in) : in_(&in), source_("<stream>") {}

std::optional<CorpusEntry> CorpusReader::next() {
  std::string line;
  if (!std::getline(*in_, line)) {
    if (in_->bad()) throw Error(ErrorCode::IoFailure, "read failed in " + source_);
    return std::nullopt;
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++line_number_;

  try {
    PatentRecord rec = parse_patent_record(line);
    if (!seen_ids_.insert(rec.patent_id).second) {
      throw Error(ErrorCode::DuplicateId, rec.patent_id);
    }
    ++totals_.accepted;
    return CorpusEntry{line_number_, std::move(rec)};
  } catch (const Error& e) {
    ++totals_.rejected;
    return CorpusEntry{line_number_, e};
  }
}

}  // namespace pkv
