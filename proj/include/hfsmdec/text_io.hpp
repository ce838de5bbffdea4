#pragma once

#include <string>

#include "hfsmdec/fsm.hpp"
#include "hfsmdec/hfsm.hpp"

namespace hfsmdec {

struct NamedFsm {
    std::string name;
    Fsm fsm;
};

// Machine text format, one directive per line, '#' starts a comment:
//   fsm <name>
//   alphabet <sym>...
//   states <id>...
//   start <id>
//   trans <src> <sym> <dst>
// Errors carry line numbers; a duplicate (src, sym) pair is rejected.
NamedFsm parse_fsm_text(const std::string& text);
std::string serialize_fsm_text(const NamedFsm& m);

NamedFsm load_fsm_file(const std::string& path);

// JSON format:
//   { "alphabet": [...], "root": "R",
//     "machines": [ {"name","states","start","transitions":[[src,sym,dst]..]} ],
//     "nesting":  [ {"parent","state","child"} ] }
// Validation failures name the offending field path.
Hfsm parse_hfsm_json(const std::string& text);
std::string serialize_hfsm_json(const Hfsm& z);

Hfsm load_hfsm_file(const std::string& path);

// Any machine file: .fsm text loads as a flat hfsm, otherwise JSON.
Hfsm load_any_file(const std::string& path);

void write_file(const std::string& path, const std::string& content);

// DOT of the machine graph. With show_modules, the non-trivial strong
// indecomposable thin modules are drawn as nested clusters (strong modules
// never overlap, so the clusters nest properly).
std::string fsm_to_dot(const Fsm& z, bool show_modules = false);

}  // namespace hfsmdec
