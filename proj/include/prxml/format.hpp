#pragma once

#include <map>
#include <string>
#include <vector>

#include "prxml/errors.hpp"
#include "prxml/model.hpp"

namespace prxml {

// Wire format: s-expressions, one document per file.
//
//   DOC     := (prxml EVENTS ORDERED TREE)
//   EVENTS  := (events EVT*)
//   EVT     := (id bool RAT) | (id enum (VAL RAT)+)
//   ORDERED := (ordered true|false)
//   TREE    := (node "LABEL" TREE*) | (det TREE*)
//            | (ind (RAT TREE)*) | (mux (RAT TREE)*)
//            | (cie (CONJ TREE)*) | (fie (FORM TREE)*)
//            | (mie ((id VAL) TREE)*)
//   CONJ    := (and LIT*)
//   LIT     := id | (not id)
//   FORM    := LIT | (and FORM*) | (or FORM*) | (not FORM)
//
// Deterministic worlds use (xml (ordered BOOL) XTREE) with XTREE :=
// (node "LABEL" XTREE*). Match files hold (matches MATCH*) where each MATCH
// is ((w-id d-id)*) over preorder node ids. `;` starts a line comment.
// Labels are quoted strings (escapes: \" and \\); the prefix `#` is reserved
// for synthetic labels and rejected. Event and value identifiers are bare
// atoms matching [A-Za-z_][A-Za-z0-9_.-]*.

// Parse and validate; throws SyntaxError or ValidationError.
PDocument parse_prxml(const std::string& text);
XDocument parse_xml(const std::string& text);
std::vector<std::map<NodeId, NodeId>> parse_matches(const std::string& text);

// Canonical form: one node per line, two-space indent, rationals in lowest
// terms, boolean events printed in bool form. serialize(parse(s)) is a
// fixpoint.
std::string serialize(const PDocument& doc);
std::string serialize(const XDocument& doc);
std::string serialize_matches(const std::vector<std::map<NodeId, NodeId>>& matches);

// Single-line rendering of a tree, for command output.
std::string serialize_compact(const XDocument& doc);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace prxml
