#include "sortedlp/ruleml.hpp"

#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string/replace.hpp>
#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "sortedlp/errors.hpp"
#include "sortedlp/parser.hpp"

namespace sortedlp {
namespace {

namespace pt = boost::property_tree;

const std::string kAttributes = "<xmlattr>";
const std::string kComment = "<xmlcomment>";

class Importer {
 public:
  explicit Importer(const PrefixTable& prefixes) : prefixes_(prefixes) {}

  Program run(const pt::ptree& doc) {
    for (const auto& [name, node] : doc) {
      if (name == kComment) continue;
      top(name, node);
    }
    return std::move(program_);
  }

 private:
  [[noreturn]] static void unknown(const std::string& name, const char* where) {
    throw Error("unknown RuleML element <" + name + "> in " + where);
  }

  void declareNamespaces(const pt::ptree& node) {
    auto attrs = node.get_child_optional(kAttributes);
    if (!attrs) return;
    for (const auto& [key, value] : *attrs) {
      if (key.rfind("xmlns:", 0) == 0) local_[key.substr(6)] = value.data();
    }
  }

  void top(const std::string& name, const pt::ptree& node) {
    declareNamespaces(node);
    if (name == "RuleML" || name == "Assert") {
      for (const auto& [child, sub] : node) {
        if (child == kAttributes || child == kComment) continue;
        top(child, sub);
      }
    } else if (name == "Query") {
      Clause q;
      for (const auto& [child, sub] : node) {
        if (child == kAttributes || child == kComment) continue;
        conjunction(child, sub, q.body);
      }
      program_.queries.push_back(propagateVariableTypes(std::move(q)));
    } else if (name == "Implies") {
      program_.clauses.push_back(implies(node));
    } else if (name == "Atom" || name == "Neg") {
      Clause fact;
      fact.head = literal(name, node);
      program_.clauses.push_back(propagateVariableTypes(std::move(fact)));
    } else {
      unknown(name, "document");
    }
  }

  Clause implies(const pt::ptree& node) {
    Clause c;
    std::vector<std::pair<std::string, const pt::ptree*>> positional;
    for (const auto& [child, sub] : node) {
      if (child == kAttributes || child == kComment) continue;
      if (child == "head" || child == "then") {
        c.head = single(sub, "head");
      } else if (child == "body" || child == "if") {
        for (const auto& [b, bsub] : sub) {
          if (b == kAttributes || b == kComment) continue;
          conjunction(b, bsub, c.body);
        }
      } else {
        positional.emplace_back(child, &sub);
      }
    }
    // Positional form: body first, then head.
    if (positional.size() == 2 && !c.head) {
      conjunction(positional[0].first, *positional[0].second, c.body);
      c.head = literal(positional[1].first, *positional[1].second);
    } else if (positional.size() == 1 && !c.head) {
      c.head = literal(positional[0].first, *positional[0].second);
    } else if (!positional.empty()) {
      unknown(positional.front().first, "Implies");
    }
    if (!c.head) throw Error("Implies without a head");
    if (c.head->defaultNegated) throw Error("Naf is not allowed in a rule head");
    return propagateVariableTypes(std::move(c));
  }

  Literal single(const pt::ptree& node, const char* where) {
    std::optional<Literal> out;
    for (const auto& [child, sub] : node) {
      if (child == kAttributes || child == kComment) continue;
      if (out) throw Error(std::string("more than one literal in ") + where);
      out = literal(child, sub);
    }
    if (!out) throw Error(std::string("empty ") + where);
    return *out;
  }

  void conjunction(const std::string& name, const pt::ptree& node, std::vector<Literal>& out) {
    if (name == "And") {
      for (const auto& [child, sub] : node) {
        if (child == kAttributes || child == kComment) continue;
        conjunction(child, sub, out);
      }
      return;
    }
    out.push_back(literal(name, node));
  }

  Literal literal(const std::string& name, const pt::ptree& node) {
    if (name == "Neg") {
      Literal l = single(node, "Neg");
      if (l.negated || l.defaultNegated) throw Error("Neg must wrap an Atom");
      l.negated = true;
      return l;
    }
    if (name == "Naf") {
      Literal l = single(node, "Naf");
      if (l.defaultNegated) throw Error("nested Naf");
      l.defaultNegated = true;
      return l;
    }
    if (name != "Atom") unknown(name, "a literal position");
    std::optional<std::string> rel;
    std::vector<Term> args;
    for (const auto& [child, sub] : node) {
      if (child == kAttributes || child == kComment) continue;
      if (child == "Rel") {
        rel = text(sub);
      } else if (child == "op") {
        rel = text(sub.get_child("Rel"));
      } else {
        args.push_back(term(child, sub));
      }
    }
    if (!rel || rel->empty()) throw Error("Atom without Rel");
    return Literal(*rel, std::move(args));
  }

  Term term(const std::string& name, const pt::ptree& node) {
    if (name == "Var") {
      const std::string n = text(node);
      if (n.empty()) throw Error("Var without a name");
      return Term::variable(n, typeOf(node));
    }
    if (name == "Ind" || name == "Data") return Term::constant(text(node), typeOf(node));
    if (name == "Expr") {
      std::optional<std::string> fun;
      std::vector<Term> args;
      for (const auto& [child, sub] : node) {
        if (child == kAttributes || child == kComment) continue;
        if (child == "Fun") {
          fun = text(sub);
        } else if (child == "op") {
          fun = text(sub.get_child("Fun"));
        } else {
          args.push_back(term(child, sub));
        }
      }
      if (!fun) throw Error("Expr without Fun");
      if (args.empty()) throw Error("Expr without arguments");
      return Term::compound(*fun, std::move(args));
    }
    unknown(name, "an argument position");
  }

  static std::string text(const pt::ptree& node) { return boost::algorithm::trim_copy(node.data()); }

  TypeRef typeOf(const pt::ptree& node) {
    auto value = node.get_optional<std::string>(kAttributes + ".type");
    if (!value) return TypeRef::top();
    const std::string v = boost::algorithm::trim_copy(*value);
    const auto colon = v.find(':');
    if (colon != std::string::npos) {
      const std::string prefix = v.substr(0, colon);
      const std::string local = v.substr(colon + 1);
      if (auto it = local_.find(prefix); it != local_.end()) return TypeRef(it->second + local);
      if (auto base = prefixes_.base(prefix)) return TypeRef(*base + local);
      if (looksLikeIri(v) && local.rfind("//", 0) == 0) return TypeRef(v);
    }
    throw Error("cannot resolve type \"" + v + "\" (declare its prefix with xmlns or a prefix directive)");
  }

  const PrefixTable& prefixes_;
  std::map<std::string, std::string> local_;
  Program program_;
};

class Exporter {
 public:
  explicit Exporter(const PrefixTable& prefixes) : prefixes_(prefixes) {}

  std::string run(const Program& program) {
    pt::ptree root;
    pt::ptree assertion;
    for (const Clause& c : program.clauses) {
      if (c.body.empty()) {
        const auto [name, node] = literal(*c.head);
        assertion.add_child(name, node);
        continue;
      }
      pt::ptree implies;
      pt::ptree head;
      const auto [hname, hnode] = literal(*c.head);
      head.add_child(hname, hnode);
      implies.add_child("head", head);
      pt::ptree body;
      body.add_child("And", conjunction(c.body));
      implies.add_child("body", body);
      assertion.add_child("Implies", implies);
    }
    pt::ptree ruleml;
    for (const auto& [abbrev, base] : used_) ruleml.put(kAttributes + ".xmlns:" + abbrev, base);
    ruleml.add_child("Assert", assertion);
    for (const Clause& q : program.queries) {
      pt::ptree query;
      query.add_child("And", conjunction(q.body));
      ruleml.add_child("Query", query);
    }
    root.add_child("RuleML", ruleml);
    std::ostringstream out;
    pt::write_xml(out, root, pt::xml_writer_make_settings<std::string>(' ', 2));
    return out.str();
  }

 private:
  pt::ptree conjunction(const std::vector<Literal>& body) {
    pt::ptree andNode;
    for (const Literal& l : body) {
      const auto [name, node] = literal(l);
      andNode.add_child(name, node);
    }
    return andNode;
  }

  std::pair<std::string, pt::ptree> literal(const Literal& l) {
    pt::ptree atom;
    atom.put("Rel", std::string(l.predicate.str()));
    for (const Term& a : l.args) {
      const auto [name, node] = term(a);
      atom.add_child(name, node);
    }
    std::pair<std::string, pt::ptree> out{"Atom", atom};
    if (l.negated) {
      pt::ptree neg;
      neg.add_child("Atom", atom);
      out = {"Neg", neg};
    }
    if (l.defaultNegated) {
      pt::ptree naf;
      naf.add_child(out.first, out.second);
      out = {"Naf", naf};
    }
    return out;
  }

  std::pair<std::string, pt::ptree> term(const Term& t) {
    pt::ptree node;
    switch (t.kind()) {
      case Term::Kind::Variable:
        node.put_value(std::string(t.name().str()));
        annotate(node, t.type());
        return {"Var", node};
      case Term::Kind::Constant:
        node.put_value(std::string(t.name().str()));
        annotate(node, t.type());
        return {"Ind", node};
      case Term::Kind::Compound:
        node.put("Fun", std::string(t.name().str()));
        for (const Term& a : t.args()) {
          const auto [name, sub] = term(a);
          node.add_child(name, sub);
        }
        return {"Expr", node};
    }
    return {"Ind", node};
  }

  void annotate(pt::ptree& node, TypeRef type) {
    if (type.isTop()) return;
    if (auto q = prefixes_.compactQName(type.iri())) {
      const std::string abbrev = q->substr(0, q->find(':'));
      used_.emplace(abbrev, *prefixes_.base(abbrev));
      node.put(kAttributes + ".type", *q);
      return;
    }
    node.put(kAttributes + ".type", std::string(type.iri()));
  }

  const PrefixTable& prefixes_;
  std::map<std::string, std::string> used_;
};

}  // namespace

Program importRuleML(std::string_view xml, const PrefixTable& prefixes) {
  std::string text(xml);
  boost::algorithm::replace_all(text, "@type=", "type=");
  std::istringstream in(text);
  pt::ptree doc;
  try {
    pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(e.line(), 1, e.message());
  }
  return Importer(prefixes).run(doc);
}

std::string exportRuleML(const Program& program, const PrefixTable& prefixes) {
  return Exporter(prefixes).run(program);
}

}  // namespace sortedlp
