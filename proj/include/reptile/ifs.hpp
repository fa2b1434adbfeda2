// Rep-tile systems 2A = h_1(A) u ... u h_m(A) with expansion x -> 2x and
// m = 2^d lattice isometries, plus the block construction and the text format.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "reptile/lattice_isometry.hpp"

namespace reptile {

inline constexpr int map_count(int dim) { return 1 << dim; }

class RepTileSystem {
  public:
    RepTileSystem() = default;
    // Validates dim and that there are exactly 2^dim maps of dimension dim.
    RepTileSystem(int dim, std::vector<LatticeIsometry> maps);

    int dim() const noexcept { return dim_; }
    int size() const noexcept { return static_cast<int>(maps_.size()); }
    const std::vector<LatticeIsometry>& maps() const noexcept { return maps_; }
    const LatticeIsometry& map(int k) const { return maps_.at(k); }

    friend bool operator==(const RepTileSystem&, const RepTileSystem&) = default;

  private:
    int dim_ = 0;
    std::vector<LatticeIsometry> maps_;
};

// The restricted 2x2x2 search space: 2A = C u f1(C), C = D u f2(D),
// D = f3(A) u f4(A). Always three-dimensional.
struct BlockSystem {
    LatticeIsometry f1, f2, f3, f4;

    BlockSystem() = default;
    BlockSystem(LatticeIsometry a, LatticeIsometry b, LatticeIsometry c, LatticeIsometry d);

    friend bool operator==(const BlockSystem&, const BlockSystem&) = default;
};

// [f3, f4, f2f3, f2f4, f1f3, f1f4, f1f2f3, f1f2f4]
RepTileSystem block_expand(const BlockSystem& b);

// Piece address; letters are 0-based map indices, first letter is the
// coarsest subdivision.
using Word = std::vector<int>;

// H_w = g^n f_{w1} ... f_{wn} with f_k = g^{-1} h_k, an integer isometry
// placing piece w inside the level-n supertile g^n(A).
LatticeIsometry word_map(const RepTileSystem& s, const Word& w);

// R = max(1, max_k |v_k|_inf); the attractor lies in [-R, R]^d.
std::int64_t bounding_radius(const RepTileSystem& s);

using BigCount = boost::multiprecision::cpp_int;

// (|matrices(dim)| * (2 range + 1)^dim)^num_maps
BigCount data_space_count(int dim, int range, int num_maps);

// Common well-known systems.
RepTileSystem square_system();
RepTileSystem cube_system();

// ---------------------------------------------------------------------------
// Text format

using SystemDocument = std::variant<RepTileSystem, BlockSystem>;

SystemDocument parse_system(std::string_view text);
std::string emit_system(const SystemDocument& doc);
// Single-line form, used inside result-store records.
std::string emit_system_compact(const SystemDocument& doc);

// Parses and expands blocks; this is the form every analysis consumes.
RepTileSystem load_system(std::string_view text);
RepTileSystem expand(const SystemDocument& doc);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace reptile
