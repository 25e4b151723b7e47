#include "sphlas/sdp.hpp"

#include "sphlas/cache.hpp"

#include "serialize.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace sphlas {

namespace {

using Json = nlohmann::json;

constexpr const char* kFormatVersion = "1";

Rat rat_const(const RatFuncN& f) {
    if (f.num.degree() > 0 || f.den.degree() > 0)
        throw std::logic_error("nonconstant coefficient in a fixed-dimension instance");
    if (f.num.is_zero()) return Rat(0);
    return f.num.c[0] / f.den.c[0];
}

void check_fixed_dimension(const Rat& n, unsigned t) {
    if (n.get_den() != 1 || n < static_cast<long>(2 * t))
        throw std::domain_error("fixed dimension must be an integer of size at least 2t");
}

// Fixed number of digits after the decimal point, truncated. Exact long
// division, so output is independent of any float rounding mode.
std::string rat_decimal(const Rat& q, unsigned digits) {
    if (q == 0) return "0";
    Int num = q.get_num();
    Int den = q.get_den();
    bool neg = num < 0;
    if (neg) num = -num;
    Int ipart = num / den;
    Int r = num % den;
    std::string s = ipart.get_str();
    if (neg) s.insert(s.begin(), '-');
    if (r != 0 && digits > 0) {
        s += '.';
        for (unsigned i = 0; i < digits && r != 0; ++i) {
            r *= 10;
            Int d = r / den;
            s += d.get_str();
            r %= den;
        }
    }
    return s;
}

}  // namespace

size_t SdpInstance::total_dim() const {
    size_t d = 0;
    for (const auto& b : blocks) d += b.size;
    return d;
}

size_t SdpInstance::block_index(const Partition& lambda) const {
    for (size_t b = 0; b < blocks.size(); ++b)
        if (blocks[b].lambda == lambda) return b;
    return blocks.size();
}

std::vector<std::pair<std::vector<size_t>, std::vector<size_t>>> covering_pairs(size_t k,
                                                                                unsigned t) {
    std::vector<std::pair<std::vector<size_t>, std::vector<size_t>>> out;
    size_t total = 1;
    for (size_t e = 0; e < k; ++e) total *= 3;
    // digit 0: first set only, 1: second only, 2: both
    for (size_t code = 0; code < total; ++code) {
        std::vector<size_t> j1, j2;
        size_t c = code;
        for (size_t e = 0; e < k; ++e) {
            size_t d = c % 3;
            c /= 3;
            if (d != 1) j1.push_back(e);
            if (d != 0) j2.push_back(e);
        }
        if (j1.size() <= t && j2.size() <= t) out.emplace_back(std::move(j1), std::move(j2));
    }
    return out;
}

SdpInstance assemble(const DistanceSet& d, unsigned t, const AssembleOptions& opt) {
    if (t == 0) throw std::invalid_argument("relaxation level must be at least 1");

    SdpInstance inst;
    inst.dist_values = d.values;
    inst.projective = d.projective;
    inst.t = t;
    inst.degree = opt.degree;

    std::vector<Partition> lambdas =
        opt.lambdas.empty() ? zonal_lambda_list(t, opt.degree, d.projective) : opt.lambdas;
    bool have_trivial = false;
    for (const auto& lam : lambdas) have_trivial = have_trivial || lam.empty();
    if (!have_trivial)
        throw std::invalid_argument("the empty partition carries the objective and is required");

    if (opt.n) {
        check_fixed_dimension(*opt.n, t);
        inst.symbolic = false;
        inst.n = *opt.n;
    }

    inst.var_orbits = enumerate_orbits(d, t);
    for (auto& rep : enumerate_orbits(d, 2 * t))
        if (rep.size > 0) inst.con_orbits.push_back(std::move(rep));

    const size_t norb = inst.var_orbits.size();
    size_t empty_orbit = norb;
    for (size_t i = 0; i < norb; ++i)
        if (inst.var_orbits[i].size == 0) empty_orbit = i;
    if (empty_orbit == norb) throw std::logic_error("orbit enumeration lost the empty set");

    std::vector<std::vector<InvariantBasis>> bases;
    for (const auto& lam : lambdas) {
        std::vector<InvariantBasis> row;
        for (const auto& rep : inst.var_orbits) row.push_back(invariant_basis(lam, rep));
        bases.push_back(std::move(row));
    }

    // Per block, the position of each orbit inside the layout (-1 when its
    // invariant space is empty there).
    std::vector<std::vector<int>> orbit_pos;
    std::vector<size_t> lam_of_block;
    for (size_t li = 0; li < lambdas.size(); ++li) {
        SdpBlockLayout blk;
        blk.lambda = lambdas[li];
        std::vector<int> pos(norb, -1);
        for (size_t i = 0; i < norb; ++i) {
            size_t dim = bases[li][i].dim();
            if (dim == 0) continue;
            pos[i] = static_cast<int>(blk.orbit.size());
            blk.orbit.push_back(i);
            blk.dim.push_back(dim);
            blk.offset.push_back(blk.size);
            blk.size += dim;
        }
        if (blk.size == 0) continue;
        orbit_pos.push_back(std::move(pos));
        lam_of_block.push_back(li);
        inst.blocks.push_back(std::move(blk));
    }

    size_t trivial_block = inst.block_index(Partition{});
    if (trivial_block == inst.blocks.size())
        throw std::logic_error("trivial block vanished despite a nonempty basis");
    inst.objective_block = trivial_block;
    int epos = orbit_pos[trivial_block][empty_orbit];
    if (epos < 0) throw std::logic_error("empty set carries no trivial invariant");
    inst.objective_row = inst.blocks[trivial_block].offset[static_cast<size_t>(epos)];

    OrbitIndex vidx = OrbitIndex::build(inst.var_orbits);
    std::map<std::tuple<size_t, size_t, size_t>, ZonalBlock> zcache;
    auto zonal_of = [&](size_t b, size_t i1, size_t i2) -> const ZonalBlock& {
        auto key = std::make_tuple(b, i1, i2);
        auto it = zcache.find(key);
        if (it != zcache.end()) return it->second;
        size_t li = lam_of_block[b];
        ZonalBlock zb = zonal_block(lambdas[li], inst.var_orbits[i1], inst.var_orbits[i2],
                                    bases[li][i1], bases[li][i2], t, opt.zonal);
        return zcache.emplace(key, std::move(zb)).first->second;
    };

    for (size_t ci = 0; ci < inst.con_orbits.size(); ++ci) {
        const OrbitRep& rep = inst.con_orbits[ci];
        SdpConstraint con;
        con.orbit_key = rep.key;
        con.orbit_index = ci;
        con.orbit_size = rep.size;
        con.rhs = rep.size == 1 ? Rat(-1) : Rat(0);
        for (const auto& blk : inst.blocks) con.coeff.emplace_back(blk.size, blk.size);

        for (const auto& [j1, j2] : covering_pairs(rep.size, t)) {
            TransporterBlock tb = transporter(rep, j1, j2, inst.var_orbits, vidx);
            Matrix<Rat> cross = transporter_cross_gram(tb, inst.var_orbits);
            size_t i1 = tb.src_orbit;
            size_t i2 = tb.dst_orbit;
            for (size_t b = 0; b < inst.blocks.size(); ++b) {
                int p1 = orbit_pos[b][i1];
                int p2 = orbit_pos[b][i2];
                if (p1 < 0 || p2 < 0) continue;
                const SdpBlockLayout& blk = inst.blocks[b];
                size_t o1 = blk.offset[static_cast<size_t>(p1)];
                size_t o2 = blk.offset[static_cast<size_t>(p2)];
                const ZonalBlock& zb = zonal_of(b, i1, i2);
                if (inst.symbolic) {
                    Matrix<RatFuncN> z = zonal_eval(zb, cross);
                    for (size_t r = 0; r < z.rows; ++r)
                        for (size_t c = 0; c < z.cols; ++c)
                            con.coeff[b](o1 + r, o2 + c) = con.coeff[b](o1 + r, o2 + c) + z(r, c);
                } else {
                    Matrix<Rat> z = zonal_eval(zb, cross, inst.n);
                    for (size_t r = 0; r < z.rows; ++r)
                        for (size_t c = 0; c < z.cols; ++c)
                            con.coeff[b](o1 + r, o2 + c) =
                                con.coeff[b](o1 + r, o2 + c) + RatFuncN(z(r, c));
                }
            }
        }

        for (const auto& m : con.coeff)
            for (size_t r = 0; r < m.rows; ++r)
                for (size_t c = r + 1; c < m.cols; ++c)
                    if (m(r, c) != m(c, r))
                        throw std::logic_error("assembled constraint row is not symmetric");

        inst.constraints.push_back(std::move(con));
    }

    return inst;
}

SdpInstance instantiate(const SdpInstance& inst, const Rat& n) {
    if (!inst.symbolic) throw std::invalid_argument("instance is already at a fixed dimension");
    check_fixed_dimension(n, inst.t);
    SdpInstance out = inst;
    out.symbolic = false;
    out.n = n;
    for (auto& con : out.constraints)
        for (auto& m : con.coeff)
            for (auto& e : m.data) e = RatFuncN(e.eval(n));
    return out;
}

namespace {

Json orbit_to_json(const OrbitRep& rep) {
    Json j;
    j["key"] = rep.key;
    j["size"] = rep.size;
    j["rank"] = rep.rank;
    j["gram"] = ser::rat_matrix_to_json(rep.gram);
    return j;
}

OrbitRep orbit_from_json(const Json& j, bool projective) {
    OrbitRep rep;
    rep.key = j.at("key").get<std::string>();
    rep.size = j.at("size").get<size_t>();
    rep.rank = j.at("rank").get<size_t>();
    rep.projective = projective;
    rep.gram = ser::rat_matrix_from_json(j.at("gram"));
    return rep;
}

}  // namespace

std::string instance_to_json(const SdpInstance& inst) {
    Json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = "sdp_instance";
    Json dist = Json::array();
    for (const Rat& v : inst.dist_values) dist.push_back(rat_to_string(v));
    j["distance_set"] = std::move(dist);
    j["projective"] = inst.projective;
    j["t"] = inst.t;
    j["degree"] = inst.degree;
    j["symbolic"] = inst.symbolic;
    j["n"] = rat_to_string(inst.n);
    j["objective_offset"] = rat_to_string(inst.objective_offset);

    Json vorb = Json::array();
    for (const auto& rep : inst.var_orbits) vorb.push_back(orbit_to_json(rep));
    j["var_orbits"] = std::move(vorb);
    Json corb = Json::array();
    for (const auto& rep : inst.con_orbits) corb.push_back(orbit_to_json(rep));
    j["con_orbits"] = std::move(corb);

    Json blocks = Json::array();
    for (const auto& blk : inst.blocks) {
        Json b;
        b["lambda"] = ser::partition_to_json(blk.lambda);
        b["orbit"] = blk.orbit;
        b["dim"] = blk.dim;
        b["offset"] = blk.offset;
        b["size"] = blk.size;
        blocks.push_back(std::move(b));
    }
    j["blocks"] = std::move(blocks);
    j["objective_block"] = inst.objective_block;
    j["objective_row"] = inst.objective_row;

    Json cons = Json::array();
    for (const auto& con : inst.constraints) {
        Json c;
        c["orbit_key"] = con.orbit_key;
        c["orbit_index"] = con.orbit_index;
        c["orbit_size"] = con.orbit_size;
        c["rhs"] = rat_to_string(con.rhs);
        Json mats = Json::array();
        for (const auto& m : con.coeff) mats.push_back(ser::ratfunc_matrix_to_json(m));
        c["coeff"] = std::move(mats);
        cons.push_back(std::move(c));
    }
    j["constraints"] = std::move(cons);
    return j.dump();
}

SdpInstance instance_from_json(const std::string& doc) {
    Json j = Json::parse(doc);
    if (j.at("format_version").get<std::string>() != kFormatVersion)
        throw std::invalid_argument("unsupported instance format version");
    if (j.at("kind").get<std::string>() != "sdp_instance")
        throw std::invalid_argument("document is not an instance");

    SdpInstance inst;
    for (const auto& v : j.at("distance_set"))
        inst.dist_values.push_back(rat_from_string(v.get<std::string>()));
    inst.projective = j.at("projective").get<bool>();
    inst.t = j.at("t").get<unsigned>();
    inst.degree = j.at("degree").get<unsigned>();
    inst.symbolic = j.at("symbolic").get<bool>();
    inst.n = rat_from_string(j.at("n").get<std::string>());
    inst.objective_offset = rat_from_string(j.at("objective_offset").get<std::string>());

    for (const auto& o : j.at("var_orbits"))
        inst.var_orbits.push_back(orbit_from_json(o, inst.projective));
    for (const auto& o : j.at("con_orbits"))
        inst.con_orbits.push_back(orbit_from_json(o, inst.projective));

    for (const auto& b : j.at("blocks")) {
        SdpBlockLayout blk;
        blk.lambda = ser::partition_from_json(b.at("lambda"));
        blk.orbit = b.at("orbit").get<std::vector<size_t>>();
        blk.dim = b.at("dim").get<std::vector<size_t>>();
        blk.offset = b.at("offset").get<std::vector<size_t>>();
        blk.size = b.at("size").get<size_t>();
        inst.blocks.push_back(std::move(blk));
    }
    inst.objective_block = j.at("objective_block").get<size_t>();
    inst.objective_row = j.at("objective_row").get<size_t>();

    for (const auto& c : j.at("constraints")) {
        SdpConstraint con;
        con.orbit_key = c.at("orbit_key").get<std::string>();
        con.orbit_index = c.at("orbit_index").get<size_t>();
        con.orbit_size = c.at("orbit_size").get<size_t>();
        con.rhs = rat_from_string(c.at("rhs").get<std::string>());
        for (const auto& m : c.at("coeff"))
            con.coeff.push_back(ser::ratfunc_matrix_from_json(m));
        inst.constraints.push_back(std::move(con));
    }
    return inst;
}

std::string instance_digest(const SdpInstance& inst) { return sha256_hex(instance_to_json(inst)); }

std::string sdpa_to_string(const SdpaDocument& doc) {
    std::ostringstream os;
    os << doc.m << "\n" << doc.block_sizes.size() << "\n";
    for (size_t i = 0; i < doc.block_sizes.size(); ++i) {
        if (i) os << " ";
        os << doc.block_sizes[i];
    }
    os << "\n";
    for (size_t i = 0; i < doc.rhs.size(); ++i) {
        if (i) os << " ";
        os << doc.rhs[i];
    }
    os << "\n";
    for (const auto& e : doc.entries)
        os << e.con << " " << e.block << " " << e.row << " " << e.col << " " << e.value << "\n";
    return os.str();
}

SdpaDocument parse_sdpa(const std::string& text) {
    // token stream after stripping comments and separator punctuation
    std::vector<std::string> tokens;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '*' || line[first] == '"') continue;
        for (char& ch : line)
            if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    size_t pos = 0;
    auto next = [&]() -> const std::string& {
        if (pos >= tokens.size()) throw std::invalid_argument("truncated solver input document");
        return tokens[pos++];
    };
    SdpaDocument doc;
    doc.m = std::stoul(next());
    size_t nblocks = std::stoul(next());
    for (size_t i = 0; i < nblocks; ++i) doc.block_sizes.push_back(std::stol(next()));
    for (size_t i = 0; i < doc.m; ++i) doc.rhs.push_back(next());
    while (pos + 5 <= tokens.size()) {
        SdpaEntry e;
        e.con = std::stoul(next());
        e.block = std::stoul(next());
        e.row = std::stoul(next());
        e.col = std::stoul(next());
        e.value = next();
        doc.entries.push_back(std::move(e));
    }
    if (pos != tokens.size()) throw std::invalid_argument("trailing tokens in solver input document");
    return doc;
}

SdpaExport export_sdpa(const SdpInstance& inst, unsigned decimal_digits) {
    if (inst.symbolic)
        throw std::invalid_argument("solver export requires a fixed dimension; instantiate first");

    SdpaExport ex;
    const size_t m = inst.constraints.size();
    ex.doc.m = m;
    for (const auto& blk : inst.blocks) ex.doc.block_sizes.push_back(static_cast<long>(blk.size));
    if (m > 0) ex.doc.block_sizes.push_back(-static_cast<long>(m));
    const size_t slack_block = inst.blocks.size() + 1;

    ex.scale_exp.assign(m, 0);
    std::vector<Rat> scale(m, Rat(1));
    for (size_t i = 0; i < m; ++i) {
        Rat maxabs = 0;
        for (const auto& mat : inst.constraints[i].coeff)
            for (const auto& e : mat.data) {
                Rat a = abs(rat_const(e));
                if (a > maxabs) maxabs = a;
            }
        if (maxabs == 0) continue;
        while (scale[i] * maxabs < 1) {
            scale[i] *= inst.n;
            ++ex.scale_exp[i];
        }
    }

    for (size_t i = 0; i < m; ++i)
        ex.doc.rhs.push_back(rat_decimal(inst.constraints[i].rhs * scale[i], decimal_digits));

    // objective: maximize minus the tracked entry, so a single -1 coefficient
    ex.doc.entries.push_back({0, inst.objective_block + 1, inst.objective_row + 1,
                              inst.objective_row + 1, "-1"});
    for (size_t i = 0; i < m; ++i) {
        const SdpConstraint& con = inst.constraints[i];
        for (size_t b = 0; b < con.coeff.size(); ++b) {
            const auto& mat = con.coeff[b];
            for (size_t r = 0; r < mat.rows; ++r)
                for (size_t c = r; c < mat.cols; ++c) {
                    Rat v = rat_const(mat(r, c)) * scale[i];
                    if (v == 0) continue;
                    ex.doc.entries.push_back(
                        {i + 1, b + 1, r + 1, c + 1, rat_decimal(v, decimal_digits)});
                }
        }
        ex.doc.entries.push_back({i + 1, slack_block, i + 1, i + 1, "1"});
    }
    ex.text = sdpa_to_string(ex.doc);
    return ex;
}

Rat PerturbedVariant::shift() const {
    if (k == 0) return Rat(0);
    Rat p = 1;
    for (long i = 0; i < k; ++i) p /= base.n;
    return p;
}

SdpInstance PerturbedVariant::solver_form() const {
    if (k == 0) return base;
    SdpInstance out = base;
    Rat s = shift();
    for (auto& con : out.constraints) {
        Rat tr = 0;
        for (const auto& mat : con.coeff)
            for (size_t r = 0; r < mat.rows; ++r) tr += rat_const(mat(r, r));
        con.rhs = con.rhs - s - s * tr;
    }
    out.objective_offset = out.objective_offset + s;
    return out;
}

PerturbedVariant perturb(const SdpInstance& inst, long k) {
    if (inst.symbolic)
        throw std::invalid_argument("perturbation requires a fixed dimension");
    if (k < 0) throw std::invalid_argument("perturbation exponent must be nonnegative");
    return PerturbedVariant{inst, k};
}

}  // namespace sphlas
