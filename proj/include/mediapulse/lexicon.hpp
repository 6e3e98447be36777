#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mediapulse {

enum class EntityKind { party, leader };

std::string_view to_string(EntityKind kind);
std::optional<EntityKind> entity_kind_from_string(std::string_view text);

// A surface form that counts as a mention of its entity. Aliases match as
// whole token sequences after normalization, never as raw substrings.
struct Alias {
  std::string surface;
};

// A political party or leader being tracked. Parties and leaders are tallied
// as separate groups; counterpart_id ties a leader to its party.
struct Entity {
  std::string id;
  EntityKind kind = EntityKind::party;
  std::string display_name;
  std::string counterpart_id;  // empty when unset
  std::vector<Alias> aliases;
};

// The entity roster and its alias vocabulary, in declaration order.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::vector<Entity> entities);

  const std::vector<Entity>& entities() const { return entities_; }
  const Entity* find(std::string_view id) const;
  // Entities of one kind, preserving declaration order.
  std::vector<const Entity*> group(EntityKind kind) const;

 private:
  std::vector<Entity> entities_;
};

// Parses and validates a lexicon document:
//
//   [entity]
//   id = pp
//   kind = party
//   display_name = PP
//   counterpart = casado
//   alias = Partido Popular
//   alias = Génova
//
// Errors: malformed lines -> ParseError with line number; the same surface
// assigned to two entities, or two aliases of different entities that
// collide under the default normalization policy -> AmbiguityError; missing
// aliases, duplicate ids or dangling counterparts -> ValidationError.
// Matchers compiled under a non-default policy re-check collisions for that
// policy in compile().
Lexicon load_lexicon(std::string_view config_text);

}  // namespace mediapulse
