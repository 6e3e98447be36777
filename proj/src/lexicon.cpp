#include "mediapulse/lexicon.hpp"

#include <map>
#include <set>

#include "mediapulse/conf.hpp"
#include "mediapulse/errors.hpp"
#include "mediapulse/text_norm.hpp"

namespace mediapulse {

std::string_view to_string(EntityKind kind) {
  return kind == EntityKind::party ? "party" : "leader";
}

std::optional<EntityKind> entity_kind_from_string(std::string_view text) {
  if (text == "party") return EntityKind::party;
  if (text == "leader") return EntityKind::leader;
  return std::nullopt;
}

Lexicon::Lexicon(std::vector<Entity> entities) : entities_(std::move(entities)) {}

const Entity* Lexicon::find(std::string_view id) const {
  for (const auto& entity : entities_) {
    if (entity.id == id) return &entity;
  }
  return nullptr;
}

std::vector<const Entity*> Lexicon::group(EntityKind kind) const {
  std::vector<const Entity*> out;
  for (const auto& entity : entities_) {
    if (entity.kind == kind) out.push_back(&entity);
  }
  return out;
}

namespace {

std::string normalized_key(const std::string& surface) {
  NormalizationPolicy policy;  // defaults
  std::string joined;
  for (const auto& token : tokenize(normalize_text(surface, policy))) {
    if (!joined.empty()) joined.push_back(' ');
    joined += token.text;
  }
  return joined;
}

}  // namespace

Lexicon load_lexicon(std::string_view config_text) {
  std::vector<Entity> entities;
  std::set<std::string> seen_ids;

  for (const auto& block : parse_conf(config_text)) {
    if (block.name != "entity") {
      throw ParseError("unknown block [" + block.name + "] in lexicon file", block.line);
    }
    Entity entity;
    for (const auto& entry : block.entries) {
      if (entry.key == "id") {
        entity.id = entry.value;
      } else if (entry.key == "kind") {
        auto kind = entity_kind_from_string(entry.value);
        if (!kind) throw ParseError("unknown kind '" + entry.value + "'", entry.line);
        entity.kind = *kind;
      } else if (entry.key == "display_name") {
        entity.display_name = entry.value;
      } else if (entry.key == "counterpart") {
        entity.counterpart_id = entry.value;
      } else if (entry.key == "alias") {
        entity.aliases.push_back(Alias{entry.value});
      } else {
        throw ParseError("unknown key '" + entry.key + "' in [entity] block", entry.line);
      }
    }
    if (entity.id.empty()) throw ValidationError("entity without id (block at line " +
                                                 std::to_string(block.line) + ")");
    if (!block.get("kind")) {
      throw ValidationError("entity '" + entity.id + "' has no kind");
    }
    if (entity.display_name.empty()) entity.display_name = entity.id;
    if (!seen_ids.insert(entity.id).second) {
      throw ValidationError("duplicate entity id '" + entity.id + "'");
    }
    if (entity.aliases.empty()) {
      throw ValidationError("entity '" + entity.id + "' declares no aliases");
    }
    entities.push_back(std::move(entity));
  }

  Lexicon lexicon(std::move(entities));

  for (const auto& entity : lexicon.entities()) {
    if (entity.counterpart_id.empty()) continue;
    const Entity* other = lexicon.find(entity.counterpart_id);
    if (other == nullptr) {
      throw ValidationError("entity '" + entity.id + "' names unknown counterpart '" +
                            entity.counterpart_id + "'");
    }
    if (other->kind == entity.kind) {
      throw ValidationError("counterpart of '" + entity.id +
                            "' must be of the opposite kind, but '" + other->id + "' is also a " +
                            std::string(to_string(entity.kind)));
    }
  }

  // Ambiguity check under the default policy; compile() re-checks under the
  // policy it is actually given.
  std::map<std::string, const Entity*> owner_by_key;
  for (const auto& entity : lexicon.entities()) {
    for (const auto& alias : entity.aliases) {
      std::string key = normalized_key(alias.surface);
      if (key.empty()) {
        throw ValidationError("alias '" + alias.surface + "' of entity '" + entity.id +
                              "' normalizes to nothing");
      }
      auto [it, inserted] = owner_by_key.emplace(key, &entity);
      if (!inserted && it->second != &entity) {
        throw AmbiguityError("alias '" + alias.surface + "' is claimed by both '" +
                             it->second->id + "' and '" + entity.id + "'");
      }
    }
  }

  return lexicon;
}

}  // namespace mediapulse
