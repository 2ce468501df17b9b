// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "lllkit/csp.hpp"
#include "lllkit/group.hpp"
#include "lllkit/patterns.hpp"
#include "lllkit/tiles.hpp"

namespace lllkit {

using Json = nlohmann::json;

// Parse failures and schema violations surface as InputError.
Json read_json_file(const std::string& path);
Json parse_json(const std::string& text);

// {"kind":"torus","d":2,"q":16,"generators":[[1,0],[0,1]]}
// {"kind":"lattice","d":1,"generators":[[1]]}
// {"kind":"free","rank":2,"generators":["a","b"]}
// Missing generators mean the standard ones.
Group group_from_json(const Json& j);
Json group_to_json(const Group& g);

// Coordinate vectors, or words such as "aB" (capital = inverse, "1" = identity).
Element element_from_json(const Group& g, const Json& j);
Json element_to_json(const Group& g, const Element& e);
FiniteSubset subset_from_json(const Group& g, const Json& j);
Json subset_to_json(const Group& g, const FiniteSubset& s);

// {"k":2,"points":N,"constraints":[{"dom":[0,1],"forbidden":[[0,0],[1,1]]}]}
// "points" is a count (ids 0..N-1) or an explicit id list.
Csp csp_from_json(const Json& j);
Json csp_to_json(const Csp& csp, std::uint64_t tuple_limit = std::uint64_t{1} << 22);
Json assignment_to_json(const Assignment& f);

// {"k":3,"patterns":[{"dom":[[0,0],[1,0]],"values":[0,0]}]}
PatternSet patterns_from_json(const Group& g, const Json& j);
Json patterns_to_json(const Group& g, const PatternSet& ps);

// {"group":{...},"S":[...],"vertices":"all" | [...] | {"lo":[..],"hi":[..]}}
struct NetworkSpec {
  Group group;
  FiniteSubset s;
  FiniteSubset vertices;
};
NetworkSpec network_from_json(const Json& j);

// Tile graph file, little endian:
//   "LLLTILE1"
//   64 bytes: hex SHA-256 of the inputs (zero bytes when absent), u64 seed
//   u32 kind (0 lattice, 1 torus, 2 free), u32 dim, u32 modulus
//   u32 |D|, u64 n, u32 |S|
//   D then S, each element as u32 length followed by i32 entries
//   u64 vertex count, u64 edge count
//   edges: u64 rank, u64 rank, u32 label index (alphabet of S, u < v)
struct TileFile {
  Group group;
  TileGraph tiles;
  std::string digest;
  std::uint64_t seed = 0;
};
void write_tiles(std::ostream& out, const Group& g, const TileGraph& h,
                 const std::string& digest = {}, std::uint64_t seed = 0);
TileFile read_tiles(std::istream& in);

}  // namespace lllkit
