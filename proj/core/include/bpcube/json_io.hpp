#pragma once

#include <stdexcept>
#include <string>

#include "bpcube/cwf.hpp"

namespace bpcube {

// The document is malformed: bad JSON, missing or extra fields, unknown
// names, tables that do not line up with the declared site and truncation.
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// The document is well-formed but the tables break a law (identity or
// composition); the message names the violating cell and face maps.
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// Presheaf exchange format
// ---------------------------------------------------------------------------
//
// {
//   "site": "BPCube",                          // or "Cube"
//   "D": 2,                                    // truncation dimension
//   "cubes": [{"nB": 0, "nP": 0}, ...],        // every level, site order
//   "cells": {"(0B,0P)": ["pt", ...], ...},    // per level: cell names
//   "restrictions": {
//     "(1B,0P)->(0B,0P)": {                    // restricting w-cells to v-cells
//       "b1<=0": {"cell-at-w": "cell-at-v", ...},
//       ...                                    // one table per face map v -> w
//     }, ...                                   // every level pair, site order
//   }
// }
//
// Writing then reading is the identity, and two equal presheaves serialize
// to byte-identical documents (keys follow the site enumeration, tables
// follow cell order).  Loading validates the tables; failures raise
// validation_error with the violating triple in the message.

std::string presheaf_to_json(const Presheaf& g);
PshPtr presheaf_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Dependent type exchange format
// ---------------------------------------------------------------------------
//
// Extends the presheaf document (the context) with the fiber data:
//
//   "fibers": {"(0B,0P)": {"pt": ["x", "y"], ...}, ...},
//   "type_restrictions": {
//     "(1B,0P)->(0B,0P)": {
//       "b1<=0": {"cell-at-w": {"x": "x'", ...}, ...}
//     }, ...
//   }
//
// keyed by (cube, cell).  Loaded objects are validated like presheaves.

std::string type_to_json(const DependentType& t);
TypePtr type_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Term exchange format
// ---------------------------------------------------------------------------
//
//   {"components": {"(0B,0P)": {"pt": "x"}, ...}}
//
// names the chosen fiber element per context cell; the type is supplied by
// the caller on load and naturality is checked.

std::string term_to_json(const Term& t);
Term term_from_json(const TypePtr& type, const std::string& text);

}  // namespace bpcube
