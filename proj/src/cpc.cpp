#include "pkv/cpc.hpp"

#include "pkv/error.hpp"
#include "pkv/text.hpp"

namespace pkv {
namespace {

constexpr std::string_view kSections = "ABCDEFGHY";

char upper(char c) { return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 32) : c; }

bool is_space(char c) { return c == ' ' || c == '\t'; }

[[noreturn]] void bad_format(std::string_view raw) {
  throw Error(ErrorCode::BadFormat, "'" + std::string(raw) + "'");
}

}  // namespace

std::optional<GranularityLevel> parse_level(std::string_view name) {
  const std::string n = text::to_lower(name);
  if (n == "section") return GranularityLevel::Section;
  if (n == "class") return GranularityLevel::Class;
  if (n == "subclass") return GranularityLevel::Subclass;
  if (n == "group" || n == "maingroup" || n == "main_group") return GranularityLevel::MainGroup;
  if (n == "subgroup") return GranularityLevel::Subgroup;
  return std::nullopt;
}

std::string_view level_name(GranularityLevel level) {
  switch (level) {
    case GranularityLevel::Section: return "section";
    case GranularityLevel::Class: return "class";
    case GranularityLevel::Subclass: return "subclass";
    case GranularityLevel::MainGroup: return "group";
    case GranularityLevel::Subgroup: return "subgroup";
  }
  return "group";
}

GranularityLevel CpcCode::depth() const {
  if (!subgroup.empty()) return GranularityLevel::Subgroup;
  if (main_group != 0) return GranularityLevel::MainGroup;
  if (subclass) return GranularityLevel::Subclass;
  if (class_num) return GranularityLevel::Class;
  return GranularityLevel::Section;
}

CpcCode parse_cpc(std::string_view raw) {
  std::string_view s = raw;
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  if (s.empty()) bad_format(raw);

  CpcCode code;
  code.section = upper(s[0]);
  if (kSections.find(code.section) == std::string_view::npos) {
    throw Error(ErrorCode::BadSection, "'" + std::string(raw) + "'");
  }
  std::size_t i = 1;
  if (i == s.size()) return code;

  if (i + 2 > s.size() || !text::is_ascii_digit(s[i]) || !text::is_ascii_digit(s[i + 1])) bad_format(raw);
  code.class_num = static_cast<std::uint8_t>((s[i] - '0') * 10 + (s[i + 1] - '0'));
  i += 2;
  if (i == s.size()) return code;

  const char sub = upper(s[i]);
  if (sub < 'A' || sub > 'Z') bad_format(raw);
  code.subclass = sub;
  ++i;
  while (i < s.size() && is_space(s[i])) ++i;
  if (i == s.size()) return code;

  const std::size_t group_start = i;
  while (i < s.size() && text::is_ascii_digit(s[i])) ++i;
  const std::size_t group_len = i - group_start;
  if (group_len == 0 || group_len > 4) bad_format(raw);
  std::uint32_t group = 0;
  for (std::size_t k = group_start; k < i; ++k) group = group * 10 + static_cast<std::uint32_t>(s[k] - '0');
  if (group == 0) bad_format(raw);
  code.main_group = group;
  if (i == s.size()) return code;

  if (s[i] != '/') bad_format(raw);
  ++i;
  const std::size_t sub_start = i;
  while (i < s.size() && text::is_ascii_digit(s[i])) ++i;
  if (i != s.size() || i == sub_start || i - sub_start > 6) bad_format(raw);
  std::string digits(s.substr(sub_start));
  if (digits.find_first_not_of('0') == std::string::npos) return code;  // "/00" is the main group
  if (digits.size() == 1) digits.insert(digits.begin(), '0');
  code.subgroup = std::move(digits);
  return code;
}

std::string truncate(const CpcCode& code, GranularityLevel level) {
  std::string out(1, code.section);
  if (level == GranularityLevel::Section || !code.class_num) return out;
  out.push_back(static_cast<char>('0' + *code.class_num / 10));
  out.push_back(static_cast<char>('0' + *code.class_num % 10));
  if (level == GranularityLevel::Class || !code.subclass) return out;
  out.push_back(*code.subclass);
  if (level == GranularityLevel::Subclass || code.main_group == 0) return out;
  out += std::to_string(code.main_group);
  if (level == GranularityLevel::MainGroup || code.subgroup.empty()) return out;
  out.push_back('/');
  out += code.subgroup;
  return out;
}

DimensionRegistry::Id DimensionRegistry::intern(std::string_view key) {
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  const auto id = static_cast<Id>(texts_.size());
  texts_.emplace_back(key);
  ids_.emplace(texts_.back(), id);
  return id;
}

std::optional<DimensionRegistry::Id> DimensionRegistry::find(std::string_view key) const {
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  return std::nullopt;
}

}  // namespace pkv
