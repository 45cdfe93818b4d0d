#pragma once

#include <cstddef>
#include <random>
#include <string>

#include "vxt/vxpl.hpp"

namespace vxt::testing {

struct GenOptions {
  std::size_t max_elements = 50;
  // Labels with markup characters, quotes and non-ASCII text instead of
  // plain ASCII words. Such documents round-trip but are not meant to be
  // spoken (grammar tokens may collide).
  bool exotic_text = false;
  double promote_probability = 0.2;
};

/// A valid VXPL document: one root menu, unique ids, every record keyed,
/// every choice token unique within its menu (unless exotic_text).
vxpl::Document random_document(std::mt19937& rng, const GenOptions& options = {});

/// Serialized VXPL file content of the given doc, with the menuitem links
/// written as inner anchors (the hand-written input style).
std::string anchor_style_vxpl(const vxpl::Document& doc);

}  // namespace vxt::testing
