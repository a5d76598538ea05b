#pragma once

#include <string>

#include "gwlab/sin_tree.hpp"
#include "gwlab/tree.hpp"

namespace gwlab {

// Text codecs for trees. All three formats are line-oriented, bit-exact and
// round-trip losslessly:
//
//   LUK v1:   "LUK v1\n" then the DFS child counts, space-separated, one line.
//   PAREN v1: "PAREN v1\n" then one line of balanced parentheses. The root is
//             omitted; every vertex prints "(" its children ")".
//   SIN v1:   "SIN v1\n" then per spine generation a line "k j" followed by
//             k-1 bracketed LUK payloads, one per line, in birth order.
//
// Parsers throw ParseError carrying the byte offset and what was expected.

std::string to_luk(const OrderedTree& t);
OrderedTree from_luk(const std::string& text);

std::string to_paren(const OrderedTree& t);
OrderedTree from_paren(const std::string& text);

std::string to_sin(const SinTree& t);
SinTree from_sin(const std::string& text);

// Sniffs the header line ("LUK v1" or "PAREN v1") and decodes.
OrderedTree tree_from_text(const std::string& text);

}  // namespace gwlab
