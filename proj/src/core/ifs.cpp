#include "reptile/ifs.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "reptile/error.hpp"

namespace reptile {

using nlohmann::json;

RepTileSystem::RepTileSystem(int dim, std::vector<LatticeIsometry> maps) : dim_(dim), maps_(std::move(maps)) {
    check_dim(dim);
    if (static_cast<int>(maps_.size()) != map_count(dim)) {
        throw ValidationError("maps: expected " + std::to_string(map_count(dim)) + " maps, got " +
                              std::to_string(maps_.size()));
    }
    for (std::size_t k = 0; k < maps_.size(); ++k) {
        if (maps_[k].dim() != dim) {
            throw ValidationError("maps[" + std::to_string(k) + "]: dimension " + std::to_string(maps_[k].dim()) +
                                  " does not match system dimension " + std::to_string(dim));
        }
    }
}

BlockSystem::BlockSystem(LatticeIsometry a, LatticeIsometry b, LatticeIsometry c, LatticeIsometry d)
    : f1(std::move(a)), f2(std::move(b)), f3(std::move(c)), f4(std::move(d)) {
    const LatticeIsometry* all[] = {&f1, &f2, &f3, &f4};
    for (int k = 0; k < 4; ++k) {
        if (all[k]->dim() != 3) throw ValidationError("f" + std::to_string(k + 1) + ": block maps must be 3-dimensional");
    }
}

RepTileSystem block_expand(const BlockSystem& b) {
    const LatticeIsometry f2f3 = compose(b.f2, b.f3);
    const LatticeIsometry f2f4 = compose(b.f2, b.f4);
    return RepTileSystem(3, {b.f3, b.f4, f2f3, f2f4, compose(b.f1, b.f3), compose(b.f1, b.f4),
                             compose(b.f1, f2f3), compose(b.f1, f2f4)});
}

LatticeIsometry word_map(const RepTileSystem& s, const Word& w) {
    if (w.empty()) throw ArgumentError("word_map: empty word");
    const int n = static_cast<int>(w.size());
    if (n > 60) throw ArgumentError("word_map: word too long for 64-bit translations");
    // g^n f_{w1} ... f_{wn} = prod_i (g^{n-i} h_{wi} g^{-(n-i)}), and
    // conjugating by g^k multiplies the translation by 2^k.
    LatticeIsometry acc = LatticeIsometry::identity(s.dim());
    for (int i = 0; i < n; ++i) {
        if (w[i] < 0 || w[i] >= s.size()) throw ArgumentError("word_map: letter out of range");
        acc = compose(acc, s.map(w[i]).scaled_translation(std::int64_t{1} << (n - 1 - i)));
    }
    return acc;
}

std::int64_t bounding_radius(const RepTileSystem& s) {
    std::int64_t r = 1;
    for (const auto& h : s.maps()) r = std::max(r, h.translation().sup_norm());
    return r;
}

BigCount data_space_count(int dim, int range, int num_maps) {
    check_dim(dim);
    if (range < 0) throw ArgumentError("data_space_count: range must be >= 0");
    if (num_maps < 1) throw ArgumentError("data_space_count: num_maps must be >= 1");
    const BigCount side = 2 * range + 1;
    const BigCount per_map = BigCount(enumerate_matrices(dim).size()) * boost::multiprecision::pow(side, dim);
    return boost::multiprecision::pow(per_map, num_maps);
}

namespace {

RepTileSystem lattice_block_system(int dim) {
    std::vector<LatticeIsometry> maps;
    for (int bits = 0; bits < map_count(dim); ++bits) {
        IntVector v(dim);
        // Most significant bit on the first axis so the order is lexicographic.
        for (int i = 0; i < dim; ++i) v[i] = (bits >> (dim - 1 - i)) & 1;
        maps.push_back(LatticeIsometry::translation(v));
    }
    return RepTileSystem(dim, std::move(maps));
}

}  // namespace

RepTileSystem square_system() { return lattice_block_system(2); }
RepTileSystem cube_system() { return lattice_block_system(3); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::pair<int, int> line_and_column(std::string_view text, std::size_t byte) {
    // nlohmann reports the 1-based count of bytes read, pointing just past
    // the offending character.
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    int line = 1;
    int column = 1;
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ValidationError(where + (where.empty() ? "" : ".") + key + ": unknown field");
    }
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError((where.empty() ? "" : where + ".") + key + ": missing field");
    return *it;
}

std::vector<std::int64_t> int_array(const json& j, int dim, const std::string& where) {
    if (!j.is_array()) throw ValidationError(where + ": expected an array of integers");
    if (static_cast<int>(j.size()) != dim) {
        throw ValidationError(where + ": expected " + std::to_string(dim) + " entries, got " + std::to_string(j.size()));
    }
    std::vector<std::int64_t> out;
    for (const auto& e : j) {
        if (!e.is_number_integer()) throw ValidationError(where + ": entries must be integers");
        out.push_back(e.get<std::int64_t>());
    }
    return out;
}

LatticeIsometry parse_map(const json& j, int dim, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected an object {perm, signs, v}");
    reject_unknown(j, {"perm", "signs", "v"}, where);
    const auto perm64 = int_array(require(j, "perm", where), dim, where + ".perm");
    const auto signs64 = int_array(require(j, "signs", where), dim, where + ".signs");
    const auto v = int_array(require(j, "v", where), dim, where + ".v");
    constexpr std::int64_t kMaxCoord = std::int64_t{1} << 40;
    for (auto c : v) {
        if (c > kMaxCoord || c < -kMaxCoord) throw ValidationError(where + ".v: coordinate out of range");
    }
    std::vector<int> perm;
    std::vector<int> signs;
    for (auto p : perm64) perm.push_back(p < -1 || p > kMaxDim ? -1 : static_cast<int>(p));
    for (auto s : signs64) signs.push_back(s < -2 || s > 2 ? 2 : static_cast<int>(s));
    try {
        return {SignedPermMatrix::from_parts(perm, signs), IntVector::from_span(v)};
    } catch (const ValidationError& e) {
        throw ValidationError(where + "." + e.what());
    }
}

}  // namespace

SystemDocument parse_system(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [line, column] = line_and_column(text, e.byte);
        std::string msg = e.what();
        if (auto pos = msg.rfind(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
        throw ParseError("malformed system document: " + msg, line, column);
    }
    if (!doc.is_object()) throw ParseError("system document must be an object", 1, 1);

    const json& kind = require(doc, "kind", "");
    if (!kind.is_string()) throw ValidationError("kind: expected a string");
    const json& dim_j = require(doc, "dim", "");
    if (!dim_j.is_number_integer()) throw ValidationError("dim: expected an integer");
    const int dim = dim_j.get<int>();

    if (kind == "system") {
        reject_unknown(doc, {"kind", "dim", "maps"}, "");
        if (dim != 2 && dim != 3) throw ValidationError("dim: must be 2 or 3, got " + std::to_string(dim));
        const json& maps_j = require(doc, "maps", "");
        if (!maps_j.is_array()) throw ValidationError("maps: expected an array");
        if (static_cast<int>(maps_j.size()) != map_count(dim)) {
            throw ValidationError("maps: expected " + std::to_string(map_count(dim)) + " maps, got " +
                                  std::to_string(maps_j.size()));
        }
        std::vector<LatticeIsometry> maps;
        for (std::size_t k = 0; k < maps_j.size(); ++k) {
            maps.push_back(parse_map(maps_j[k], dim, "maps[" + std::to_string(k) + "]"));
        }
        return RepTileSystem(dim, std::move(maps));
    }
    if (kind == "block") {
        reject_unknown(doc, {"kind", "dim", "f1", "f2", "f3", "f4"}, "");
        if (dim != 3) throw ValidationError("dim: block systems must have dim 3, got " + std::to_string(dim));
        return BlockSystem(parse_map(require(doc, "f1", ""), 3, "f1"), parse_map(require(doc, "f2", ""), 3, "f2"),
                           parse_map(require(doc, "f3", ""), 3, "f3"), parse_map(require(doc, "f4", ""), 3, "f4"));
    }
    throw ValidationError("kind: expected \"system\" or \"block\", got " + kind.dump());
}

// ---------------------------------------------------------------------------
// Emission

namespace {

void emit_ints(std::ostream& os, std::span<const std::int64_t> values, bool compact) {
    os << '[';
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? (compact ? "," : ", ") : "") << values[i];
    os << ']';
}

void emit_map(std::ostream& os, const LatticeIsometry& h, bool compact) {
    const int dim = h.dim();
    std::vector<std::int64_t> perm, signs;
    for (int j = 0; j < dim; ++j) {
        perm.push_back(h.matrix().perm(j));
        signs.push_back(h.matrix().sign(j));
    }
    const char* sep = compact ? "," : ", ";
    const char* colon = compact ? ":" : ": ";
    os << "{\"perm\"" << colon;
    emit_ints(os, perm, compact);
    os << sep << "\"signs\"" << colon;
    emit_ints(os, signs, compact);
    os << sep << "\"v\"" << colon;
    emit_ints(os, h.translation().coords(), compact);
    os << '}';
}

std::string emit(const SystemDocument& doc, bool compact) {
    std::ostringstream os;
    const char* nl = compact ? "" : "\n";
    const char* ind = compact ? "" : "  ";
    const char* colon = compact ? ":" : ": ";
    os << '{' << nl;
    if (const auto* s = std::get_if<RepTileSystem>(&doc)) {
        os << ind << "\"kind\"" << colon << "\"system\"," << nl;
        os << ind << "\"dim\"" << colon << s->dim() << ',' << nl;
        os << ind << "\"maps\"" << colon << '[' << nl;
        for (int k = 0; k < s->size(); ++k) {
            os << (compact ? "" : "    ");
            emit_map(os, s->map(k), compact);
            os << (k + 1 < s->size() ? "," : "") << nl;
        }
        os << ind << ']' << nl;
    } else {
        const auto& b = std::get<BlockSystem>(doc);
        os << ind << "\"kind\"" << colon << "\"block\"," << nl;
        os << ind << "\"dim\"" << colon << 3 << ',' << nl;
        const LatticeIsometry* f[] = {&b.f1, &b.f2, &b.f3, &b.f4};
        for (int k = 0; k < 4; ++k) {
            os << ind << "\"f" << k + 1 << '"' << colon;
            emit_map(os, *f[k], compact);
            os << (k < 3 ? "," : "") << nl;
        }
    }
    os << '}' << nl;
    return os.str();
}

}  // namespace

std::string emit_system(const SystemDocument& doc) { return emit(doc, false); }
std::string emit_system_compact(const SystemDocument& doc) { return emit(doc, true); }

RepTileSystem expand(const SystemDocument& doc) {
    if (const auto* s = std::get_if<RepTileSystem>(&doc)) return *s;
    return block_expand(std::get<BlockSystem>(doc));
}

RepTileSystem load_system(std::string_view text) { return expand(parse_system(text)); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace reptile
