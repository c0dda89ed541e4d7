#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pkv {

/// Depth of CPC truncation. Ordered from coarsest to finest.
enum class GranularityLevel : std::uint8_t {
  Section = 0,
  Class = 1,
  Subclass = 2,
  MainGroup = 3,
  Subgroup = 4,
};

/// Accepts section|class|subclass|group|subgroup (case-insensitive);
/// "maingroup" and "main_group" are accepted as aliases of group.
std::optional<GranularityLevel> parse_level(std::string_view name);
std::string_view level_name(GranularityLevel level);

/// A parsed CPC (or IPC) symbol such as "H04W 88/02". Deeper fields are only
/// meaningful when `depth()` reaches them.
struct CpcCode {
  char section = 'A';                       // A-H or Y
  std::optional<std::uint8_t> class_num;    // 0-99, rendered with two digits
  std::optional<char> subclass;             // uppercase letter
  std::uint32_t main_group = 0;             // >= 1, 0 if absent
  std::string subgroup;                     // digits, at least two; empty if absent

  /// Deepest level the symbol carries.
  GranularityLevel depth() const;

  bool operator==(const CpcCode&) const = default;
};

/// Parses "H04W 88/02", "H04W88/02", "h04w", "H04", "H", "H04W 88/00".
/// Whitespace between subclass and group is optional; a subgroup of all zeros
/// means the main group itself. Throws Error(BadSection) or Error(BadFormat).
CpcCode parse_cpc(std::string_view raw);

/// Canonical prefix at `level`, or the deepest available prefix if the code
/// is shallower: "H", "H04", "H04W", "H04W88", "H04W88/02".
std::string truncate(const CpcCode& code, GranularityLevel level);

/// Canonical full rendering; equals truncate(code, Subgroup).
inline std::string render(const CpcCode& code) { return truncate(code, GranularityLevel::Subgroup); }

/// Dense id assignment for truncated code texts, in first-seen order.
class DimensionRegistry {
 public:
  using Id = std::uint32_t;

  /// Existing id for `key`, or the next free id. `key` must be nonempty.
  Id intern(std::string_view key);
  std::optional<Id> find(std::string_view key) const;
  const std::string& text(Id id) const { return texts_.at(id); }
  std::size_t size() const { return texts_.size(); }
  const std::vector<std::string>& texts() const { return texts_; }

  bool operator==(const DimensionRegistry& other) const { return texts_ == other.texts_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, Id, Hash, std::equal_to<>> ids_;
  std::vector<std::string> texts_;
};

}  // namespace pkv
