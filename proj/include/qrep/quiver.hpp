#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qrep {

/// Shape families. Infinite quivers are represented by finite truncations
/// carrying one of the *_truncation tags; their classification comes from
/// the tag, not from the truncation.
enum class FamilyTag {
  A_n,                    // finite line v1 -> ... -> vn
  AInfTruncation,         // truncation of A_inf, A^inf or A_inf^inf
  BarrenTreeTruncation,   // truncation of an infinite barren tree
  NLoop,                  // single oriented cycle
  InfParallelTruncation,  // truncation of two vertices joined by infinitely many arrows
  Custom,                 // truncation of an unspecified infinite quiver
};

std::string to_string(FamilyTag tag);
FamilyTag parse_family_tag(std::string_view text);

struct Arrow {
  std::string id;
  std::size_t source = 0;
  std::size_t target = 0;
};

class Quiver {
 public:
  Quiver() = default;
  /// Throws InvalidInput for dangling endpoints, duplicate ids or a tag that
  /// does not match the shape.
  Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows,
         std::optional<FamilyTag> tag = std::nullopt);

  static Quiver line(std::size_t n);        // v1 -a1-> v2 -a2-> ... vn, tagged A_n
  static Quiver loop(std::size_t n);        // a_i : v_i -> v_{i+1}, v_{n+1} = v_1, tagged n_loop
  static Quiver single_vertex(const std::string& name = "v");

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t arrow_count() const noexcept { return arrows_.size(); }
  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  const std::vector<Arrow>& arrows() const noexcept { return arrows_; }
  const std::string& vertex_name(std::size_t v) const { return vertices_.at(v); }
  const Arrow& arrow(std::size_t a) const { return arrows_.at(a); }
  std::size_t vertex_index(std::string_view name) const;
  std::size_t arrow_index(std::string_view name) const;
  std::optional<FamilyTag> tag() const noexcept { return tag_; }

  const std::vector<std::size_t>& outgoing(std::size_t v) const { return out_.at(v); }
  const std::vector<std::size_t>& incoming(std::size_t v) const { return in_.at(v); }

  bool is_acyclic() const noexcept { return topo_.size() == vertices_.size(); }
  /// Vertex order with every arrow pointing forward; acyclic quivers only.
  const std::vector<std::size_t>& topological_order() const;
  /// Line v1 -> v2 -> ... -> vn in vertex order (arrow i: v_i -> v_{i+1}).
  bool is_line() const;

  /// Canonical text in the quiver grammar; parse_quiver(to_text()) == *this.
  std::string to_text() const;

  friend bool operator==(const Quiver& a, const Quiver& b);
  friend bool operator!=(const Quiver& a, const Quiver& b) { return !(a == b); }

 private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
  std::optional<FamilyTag> tag_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::size_t> topo_;

  void validate_tag() const;
};

/// Grammar: statements separated by ';' or newlines, '#' starts a comment.
///   v1 v2 v3          vertex declarations
///   a: v1 -> v2       arrow
///   @family n_loop    family tag
/// Throws ParseError (with line/column) or InvalidInput.
Quiver parse_quiver(std::string_view text);

/// A path: trivial at `start` when `arrows` is empty, otherwise the arrows in
/// traversal order (first arrow first). `end` is the target vertex.
struct Path {
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<std::size_t> arrows;

  static Path trivial(std::size_t v) { return {v, v, {}}; }
  static Path of_arrow(const Quiver& q, std::size_t a);
  /// Throws InvalidInput if the arrows do not chain.
  static Path from_arrows(const Quiver& q, std::vector<std::size_t> arrows);

  std::size_t length() const noexcept { return arrows.size(); }
  bool is_trivial() const noexcept { return arrows.empty(); }
  /// Written right to left like composition: "a2*a1", or "e_v".
  std::string to_string(const Quiver& q) const;

  friend bool operator==(const Path& a, const Path& b) {
    return a.start == b.start && a.end == b.end && a.arrows == b.arrows;
  }
  friend bool operator!=(const Path& a, const Path& b) { return !(a == b); }
  /// Deterministic order: length, then arrow sequence, then endpoints.
  friend bool operator<(const Path& a, const Path& b);
};

/// `after` ∘ `before` (traverse `before` first); nothing if not composable.
std::optional<Path> compose(const Path& after, const Path& before);

/// All paths from v to w on an acyclic quiver, sorted. Refuses cyclic quivers.
std::vector<Path> paths_between(const Quiver& q, std::size_t v, std::size_t w);
/// All paths starting at v (any end), sorted.
std::vector<Path> paths_from(const Quiver& q, std::size_t v);

enum class TriState { Yes, No, Unknown };
std::string to_string(TriState t);

struct QuiverClassification {
  bool property_B = true;
  bool acyclic = true;
  TriState source_injective = TriState::Unknown;
  std::string reason;
};

QuiverClassification classify_quiver(const Quiver& q);

}  // namespace qrep
