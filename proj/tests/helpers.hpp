#pragma once

#include <string>

#include "prxml/format.hpp"
#include "prxml/model.hpp"

namespace t {

inline std::string corpus(const std::string& name) {
  return std::string(PRXML_CORPUS_DIR) + "/" + name;
}

inline prxml::PDocument doc(const std::string& text) { return prxml::parse_prxml(text); }
inline prxml::XDocument world(const std::string& text) { return prxml::parse_xml(text); }

inline prxml::PDocument load_doc(const std::string& name) {
  return prxml::parse_prxml(prxml::read_text_file(corpus(name)));
}
inline prxml::XDocument load_world(const std::string& name) {
  return prxml::parse_xml(prxml::read_text_file(corpus(name)));
}

}  // namespace t
