#pragma once

// Line-oriented text formats for templates and instances.
//
//   template := { line }
//   line     := comment | "base:" base | "rel" NAME "/" ARITY ":" [ type { ";" type } ]
//   base     := "temporal" | "tournament" | "graph" | "kfree(" N ")" | "finite(" N ")"
//
//   temporal type    1<2=3          blocks from smallest, "=" inside a block
//   tournament type  1->2, 1=3      arcs between blocks, "-" when there is nothing to list
//   graph type       E(1,2), 1=3    edges, non-edges implicit, "-" for none
//   finite tuple     0 1 1          space-separated values
//
//   instance := { "vars" NAME { NAME } | NAME "(" NAME { "," NAME } ")" | comment }
//
// Comments start with '#' and run to the end of the line.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <variant>

#include "csplab/homog.hpp"
#include "csplab/relstruct.hpp"
#include "csplab/temporal.hpp"

namespace csplab::textio {

using Template = std::variant<temporal::TemporalTemplate, homog::HomTemplate, FiniteStructure>;

/// Throws ParseError on syntax errors and ArityError when a type does not
/// cover exactly the declared positions.
Template parse_template(const std::string& text);
std::string format_template(const Template& tmpl);

std::map<std::string, std::size_t> relation_arities(const Template& tmpl);

/// Throws ParseError on syntax errors, unknown relations or undeclared
/// variables, and ArityError on arity disagreement with the template.
Instance parse_instance(const std::string& text, const Template& tmpl);
std::string format_instance(const Instance& instance);

std::string format_temporal_type(const temporal::WeakOrderType& type);
/// Positions are printed 1-based, or by name when names are given.
std::string format_labeled_type(const homog::LabeledType& type, const pairs::BaseSpec& base,
                                std::span<const std::string> names = {});
std::string base_name(const Template& tmpl);

}  // namespace csplab::textio
