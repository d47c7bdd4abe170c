#include "modx/translation/doc_path.h"

#include "modx/core/errors.h"

namespace modx::translation {

using core::DocValue;
using core::Error;
using core::ErrorCode;

DocPath parse_path(const std::string& text) {
  DocPath path;
  std::size_t i = 0;
  while (i < text.size()) {
    PathSegment seg;
    while (i < text.size() && text[i] != '.' && text[i] != '[') {
      seg.key.push_back(text[i]);
      ++i;
    }
    if (seg.key.empty()) {
      throw Error(ErrorCode::ParseError, "empty segment in path \"" + text + "\"");
    }
    if (i < text.size() && text[i] == '[') {
      std::size_t close = text.find(']', i);
      if (close == std::string::npos) {
        throw Error(ErrorCode::ParseError, "unclosed subscript in path \"" + text + "\"");
      }
      std::string sub = text.substr(i + 1, close - i - 1);
      if (sub == "*") {
        seg.kind = PathSegment::Kind::Star;
      } else {
        seg.kind = PathSegment::Kind::Index;
        try {
          seg.index = static_cast<std::size_t>(std::stoul(sub));
        } catch (const std::exception&) {
          throw Error(ErrorCode::ParseError, "bad subscript in path \"" + text + "\"");
        }
      }
      i = close + 1;
    }
    path.push_back(std::move(seg));
    if (i < text.size()) {
      if (text[i] != '.') {
        throw Error(ErrorCode::ParseError, "expected '.' in path \"" + text + "\"");
      }
      ++i;
      if (i == text.size()) {
        throw Error(ErrorCode::ParseError, "trailing '.' in path \"" + text + "\"");
      }
    }
  }
  if (path.empty()) throw Error(ErrorCode::ParseError, "empty document path");
  return path;
}

std::string path_to_string(const DocPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out.push_back('.');
    out += path[i].key;
    if (path[i].kind == PathSegment::Kind::Star) out += "[*]";
    if (path[i].kind == PathSegment::Kind::Index) out += "[" + std::to_string(path[i].index) + "]";
  }
  return out;
}

namespace {

void resolve_rec(const DocValue& node, const DocPath& path, std::size_t depth,
                 std::vector<std::size_t>& stars, std::vector<PathMatch>& out) {
  if (depth == path.size()) {
    out.push_back({stars, &node});
    return;
  }
  const PathSegment& seg = path[depth];
  const DocValue* child = node.find(seg.key);
  if (!child) return;
  switch (seg.kind) {
    case PathSegment::Kind::Plain:
      resolve_rec(*child, path, depth + 1, stars, out);
      break;
    case PathSegment::Kind::Index:
      if (child->is_array() && seg.index < child->as_array().size()) {
        resolve_rec(child->as_array()[seg.index], path, depth + 1, stars, out);
      }
      break;
    case PathSegment::Kind::Star:
      if (child->is_array()) {
        for (std::size_t i = 0; i < child->as_array().size(); ++i) {
          stars.push_back(i);
          resolve_rec(child->as_array()[i], path, depth + 1, stars, out);
          stars.pop_back();
        }
      }
      break;
  }
}

// Walks to the parent container of the final segment; nullptr when the walk
// falls off the document. `stars` supplies indices for [*] segments in order.
DocValue* walk_parent(DocValue& doc, const DocPath& path, const std::vector<std::size_t>& stars,
                      bool create_plain) {
  DocValue* node = &doc;
  std::size_t star_at = 0;
  for (std::size_t d = 0; d + 1 < path.size(); ++d) {
    const PathSegment& seg = path[d];
    if (!node->is_map()) return nullptr;
    auto& map = node->as_map();
    auto it = map.find(seg.key);
    if (it == map.end()) {
      if (!create_plain || seg.kind != PathSegment::Kind::Plain) return nullptr;
      it = map.emplace(seg.key, DocValue(core::DocMap{})).first;
    }
    node = &it->second;
    if (seg.kind == PathSegment::Kind::Star) {
      if (!node->is_array() || star_at >= stars.size()) return nullptr;
      std::size_t idx = stars[star_at++];
      if (idx >= node->as_array().size()) return nullptr;
      node = &node->as_array()[idx];
    } else if (seg.kind == PathSegment::Kind::Index) {
      if (!node->is_array() || seg.index >= node->as_array().size()) return nullptr;
      node = &node->as_array()[seg.index];
    }
  }
  return node;
}

}  // namespace

std::vector<PathMatch> resolve_path(const DocValue& doc, const DocPath& path) {
  std::vector<PathMatch> out;
  std::vector<std::size_t> stars;
  resolve_rec(doc, path, 0, stars, out);
  return out;
}

const DocValue* get_path(const DocValue& doc, const DocPath& path,
                         const std::vector<std::size_t>& stars) {
  DocValue* parent =
      walk_parent(const_cast<DocValue&>(doc), path, stars, /*create_plain=*/false);
  if (!parent) return nullptr;
  const PathSegment& last = path.back();
  const DocValue* child = parent->find(last.key);
  if (!child) return nullptr;
  if (last.kind == PathSegment::Kind::Plain) return child;
  if (!child->is_array()) return nullptr;
  std::size_t idx = last.kind == PathSegment::Kind::Index
                        ? last.index
                        : (stars.empty() ? 0 : stars.back());
  return idx < child->as_array().size() ? &child->as_array()[idx] : nullptr;
}

void set_path(DocValue& doc, const DocPath& path, const std::vector<std::size_t>& stars,
              DocValue value) {
  DocValue* parent = walk_parent(doc, path, stars, /*create_plain=*/true);
  if (!parent || !parent->is_map()) {
    throw Error(ErrorCode::PathConflict,
                "cannot reach parent container of " + path_to_string(path));
  }
  const PathSegment& last = path.back();
  if (last.kind != PathSegment::Kind::Plain) {
    throw Error(ErrorCode::PathConflict,
                "target path must end in a field name: " + path_to_string(path));
  }
  auto& map = parent->as_map();
  auto it = map.find(last.key);
  if (it != map.end()) {
    if (it->second == value) return;  // idempotent write
    throw Error(ErrorCode::PathConflict, "target " + path_to_string(path) +
                                             " already holds a different value");
  }
  map.emplace(last.key, std::move(value));
}

bool remove_path(DocValue& doc, const DocPath& path, const std::vector<std::size_t>& stars) {
  DocValue* parent = walk_parent(doc, path, stars, /*create_plain=*/false);
  if (!parent || !parent->is_map()) return false;
  const PathSegment& last = path.back();
  auto& map = parent->as_map();
  auto it = map.find(last.key);
  if (it == map.end()) return false;
  map.erase(it);
  // prune containers this removal emptied, walking the same route again
  if (map.empty() && path.size() > 1) {
    DocPath prefix(path.begin(), path.end() - 1);
    // only prune trailing Plain segments; array elements stay in place
    if (prefix.back().kind == PathSegment::Kind::Plain) {
      std::vector<std::size_t> prefix_stars = stars;
      remove_path(doc, prefix, prefix_stars);
    }
  }
  return true;
}

}  // namespace modx::translation
