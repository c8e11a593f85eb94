#include "treeflow/json_io.hpp"

#include <json.hpp>

namespace treeflow {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InvalidInput("malformed JSON");
    return j;
}

std::string rat_str(const Rat& r) { return r.str(); }

json rats_to_json(const std::vector<Rat>& v) {
    json out = json::array();
    for (const auto& r : v) out.push_back(rat_str(r));
    return out;
}

std::vector<Rat> rats_from_json(const json& j) {
    std::vector<Rat> out;
    if (!j.is_array()) throw InvalidInput("expected array of rationals");
    for (const auto& e : j) out.push_back(rat_from_string(e.get<std::string>()));
    return out;
}

template <typename T>
T field(const json& j, const char* name) {
    if (!j.contains(name)) throw InvalidInput(std::string("missing field ") + name);
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw InvalidInput(std::string("bad field ") + name);
    }
}

}  // namespace

Rat rat_from_string(const std::string& s) {
    if (s == "inf") return Rat::infinity();
    try {
        size_t slash = s.find('/');
        if (slash == std::string::npos) return Rat(std::stoll(s));
        return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw InvalidInput("bad rational: " + s);
    }
}

Instance instance_from_json(const std::string& text) {
    json j = parse(text);
    Instance in;
    in.n = field<int>(j, "n");
    in.terminals = field<std::vector<int>>(j, "terminals");
    if (!j.contains("edges") || !j.at("edges").is_array())
        throw InvalidInput("missing edges");
    for (const auto& e : j.at("edges"))
        in.edges.push_back({field<int>(e, "u"), field<int>(e, "v"),
                            field<long long>(e, "cap"), field<long long>(e, "cost")});
    if (j.contains("demands")) {
        const auto& d = j.at("demands");
        if (!d.is_object()) throw InvalidInput("demands must be an object");
        in.demands.assign(in.terminals.size(), 0);
        for (auto it = d.begin(); it != d.end(); ++it) {
            int term;
            try {
                term = std::stoi(it.key());
            } catch (const std::exception&) {
                throw InvalidInput("demand key is not a node id");
            }
            int ti = in.terminal_index(term);
            if (ti < 0) throw InvalidInput("demand for a non-terminal");
            in.demands[ti] = it.value().get<long long>();
        }
    }
    std::string prob = j.value("problem", "N");
    if (prob == "N") in.tag = ProblemTag::N;
    else if (prob == "MCMF") in.tag = ProblemTag::MCMF;
    else if (prob == "MULTIWAY") in.tag = ProblemTag::MULTIWAY;
    else throw InvalidInput("unknown problem tag: " + prob);
    in.validate();
    return in;
}

std::string instance_to_json(const Instance& in) {
    json j;
    j["n"] = in.n;
    j["terminals"] = in.terminals;
    j["edges"] = json::array();
    for (const auto& e : in.edges)
        j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"cap", e.cap}, {"cost", e.cost}});
    json d = json::object();
    for (size_t ti = 0; ti < in.demands.size(); ++ti)
        d[std::to_string(in.terminals[ti])] = in.demands[ti];
    j["demands"] = d;
    j["problem"] = in.tag == ProblemTag::N      ? "N"
                   : in.tag == ProblemTag::MCMF ? "MCMF"
                                                : "MULTIWAY";
    return j.dump(2);
}

std::string solution_to_json(const Solution& sol) {
    json j;
    j["value_halves"] = sol.value_halves;
    j["value"] = Rat(sol.value_halves, 2).str();
    j["paths"] = json::array();
    for (const auto& P : sol.flow.paths)
        j["paths"].push_back(
            {{"nodes", P.nodes}, {"lambda_halves", P.lambda_halves}});
    json sup = json::object();
    for (size_t e = 0; e < sol.support_halves.size(); ++e)
        sup[std::to_string(e)] = sol.support_halves[e];
    j["support_halves"] = sup;
    j["potential"] = json::array();
    for (size_t i = 0; i < sol.potential.h.size(); ++i) {
        json p;
        if (sol.potential.h[i] > 0) p["leg"] = sol.potential.leg[i];
        else p["leg"] = nullptr;
        p["height_halves"] = sol.potential.h[i];
        j["potential"].push_back(p);
    }
    j["certified"] = sol.certified;
    return j.dump(2);
}

Solution solution_from_json(const std::string& text) {
    json j = parse(text);
    Solution sol;
    sol.value_halves = field<long long>(j, "value_halves");
    if (j.contains("paths"))
        for (const auto& p : j.at("paths")) {
            MultiflowPath P;
            P.nodes = field<std::vector<int>>(p, "nodes");
            P.lambda_halves = field<long long>(p, "lambda_halves");
            sol.flow.paths.push_back(std::move(P));
        }
    if (j.contains("support_halves")) {
        const auto& sup = j.at("support_halves");
        for (auto it = sup.begin(); it != sup.end(); ++it) {
            size_t e;
            try {
                e = std::stoul(it.key());
            } catch (const std::exception&) {
                throw InvalidInput("support key is not an edge index");
            }
            if (sol.support_halves.size() <= e) sol.support_halves.resize(e + 1, 0);
            sol.support_halves[e] = it.value().get<long long>();
        }
    }
    if (j.contains("potential"))
        for (const auto& p : j.at("potential")) {
            long long h = field<long long>(p, "height_halves");
            int leg = p.contains("leg") && !p.at("leg").is_null()
                          ? p.at("leg").get<int>()
                          : -1;
            if (h == 0) leg = -1;
            if (h > 0 && leg < 0) throw InvalidInput("raised potential without a leg");
            sol.potential.h.push_back(h);
            sol.potential.leg.push_back(leg);
        }
    sol.certified = j.value("certified", false);
    return sol;
}

TermSum term_sum_from_json(const std::string& text) {
    json j = parse(text);
    TermSum f;
    f.domain.arities = field<std::vector<int>>(j, "arities");
    if (j.contains("terms"))
        for (const auto& t : j.at("terms")) {
            std::string kind = field<std::string>(t, "kind");
            Rat w = rat_from_string(t.value("weight", "1"));
            if (kind == "epsilon")
                f.terms.push_back(
                    BasicTerm::epsilon(field<int>(t, "i"), field<int>(t, "a"), w));
            else if (kind == "theta")
                f.terms.push_back(
                    BasicTerm::theta(field<int>(t, "i"), field<int>(t, "a"), w));
            else if (kind == "mu")
                f.terms.push_back(BasicTerm::mu(field<int>(t, "i"), field<int>(t, "j"),
                                                field<int>(t, "a"), field<int>(t, "a2"),
                                                w));
            else if (kind == "delta")
                f.terms.push_back(BasicTerm::delta(field<int>(t, "i"),
                                                   field<int>(t, "j"),
                                                   field<std::vector<int>>(t, "sigma"),
                                                   w));
            else if (kind == "unary")
                f.terms.push_back(BasicTerm::unary(
                    field<int>(t, "i"), rats_from_json(t.at("table")), w));
            else
                throw InvalidInput("unknown term kind: " + kind);
        }
    f.offset = rat_from_string(j.value("offset", "0"));
    f.validate();
    return f;
}

std::string term_sum_to_json(const TermSum& f) {
    json j;
    j["arities"] = f.domain.arities;
    j["terms"] = json::array();
    for (const auto& t : f.terms) {
        json o;
        o["weight"] = rat_str(t.weight);
        switch (t.kind) {
            case BasicTerm::Kind::Epsilon:
                o["kind"] = "epsilon";
                o["i"] = t.i;
                o["a"] = t.a;
                break;
            case BasicTerm::Kind::Theta:
                o["kind"] = "theta";
                o["i"] = t.i;
                o["a"] = t.a;
                break;
            case BasicTerm::Kind::Mu:
                o["kind"] = "mu";
                o["i"] = t.i;
                o["j"] = t.j;
                o["a"] = t.a;
                o["a2"] = t.a2;
                break;
            case BasicTerm::Kind::DeltaSigma:
                o["kind"] = "delta";
                o["i"] = t.i;
                o["j"] = t.j;
                o["sigma"] = t.sigma;
                break;
            case BasicTerm::Kind::UnaryTable:
                o["kind"] = "unary";
                o["i"] = t.i;
                o["table"] = rats_to_json(t.table);
                break;
        }
        j["terms"].push_back(o);
    }
    j["offset"] = rat_str(f.offset);
    return j.dump(2);
}

TwoSeparable two_separable_from_json(const std::string& text) {
    json j = parse(text);
    TwoSeparable g;
    const auto& tj = j.at("tree");
    int tn = field<int>(tj, "n");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : tj.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw InvalidInput("bad tree edge");
        edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    int root = tj.value("root", 0);
    try {
        g.tree = std::make_shared<const Tree>(tn, edges, root);
    } catch (const Error&) {
        throw InvalidInput("edges do not form a tree");
    }
    g.n = field<int>(j, "n");
    if (j.contains("unary"))
        for (const auto& u : j.at("unary")) {
            UnaryTreeTerm t;
            t.i = field<int>(u, "i");
            t.values = rats_from_json(u.at("values"));
            if (int(t.values.size()) != tn)
                throw InvalidInput("unary table size != tree size");
            g.unary.push_back(std::move(t));
        }
    if (j.contains("pairs"))
        for (const auto& p : j.at("pairs")) {
            PairTerm t;
            t.i = field<int>(p, "i");
            t.j = field<int>(p, "j");
            t.h = OneDimConvex(rats_from_json(p.at("h")));
            g.pairs.push_back(std::move(t));
        }
    if (j.contains("anchored"))
        for (const auto& a : j.at("anchored")) {
            AnchoredTerm t;
            t.i = field<int>(a, "i");
            t.j = field<int>(a, "j");
            t.z = field<int>(a, "z");
            t.w = field<int>(a, "w");
            t.h = OneDimConvex(rats_from_json(a.at("h")));
            g.anchored.push_back(std::move(t));
        }
    g.offset = rat_from_string(j.value("offset", "0"));
    return g;
}

std::string two_separable_to_json(const TwoSeparable& g) {
    json j;
    json tj;
    tj["n"] = g.tree->n;
    tj["edges"] = json::array();
    for (int v = 1; v < g.tree->n; ++v)
        if (g.tree->parent[v] >= 0)
            tj["edges"].push_back({g.tree->parent[v], v});
    for (int v = 0; v < g.tree->n; ++v)
        if (g.tree->parent[v] < 0) tj["root"] = v;
    j["tree"] = tj;
    j["n"] = g.n;
    j["unary"] = json::array();
    for (const auto& u : g.unary)
        j["unary"].push_back({{"i", u.i}, {"values", rats_to_json(u.values)}});
    j["pairs"] = json::array();
    for (const auto& p : g.pairs)
        j["pairs"].push_back({{"i", p.i}, {"j", p.j}, {"h", rats_to_json(p.h.values)}});
    j["anchored"] = json::array();
    for (const auto& a : g.anchored)
        j["anchored"].push_back({{"i", a.i},
                                 {"j", a.j},
                                 {"z", a.z},
                                 {"w", a.w},
                                 {"h", rats_to_json(a.h.values)}});
    j["offset"] = rat_str(g.offset);
    return j.dump(2);
}

}  // namespace treeflow
