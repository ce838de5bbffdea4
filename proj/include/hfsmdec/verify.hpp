#pragma once

#include <string>
#include <vector>

#include "hfsmdec/fsm.hpp"
#include "hfsmdec/hfsm.hpp"
#include "hfsmdec/module_theory.hpp"

namespace hfsmdec {

struct VerifyOptions {
    unsigned long long seed = 7;
    int count = 50;            // random machines
    int max_n = 7;             // states per random machine
    int max_k = 3;             // symbols per random machine
    int oracle_bound = kDefaultOracleBound;
    int hfsm_count = 20;       // random hierarchies
    int hfsm_max_states = 12;
    int words_per_hfsm = 50;
    int max_word_len = 20;
    std::string counterexample_dir = ".";
};

struct PropertyResult {
    std::string name;
    long long pass = 0;
    long long fail = 0;
    std::vector<std::string> counterexamples;  // file paths
};

struct VerifyReport {
    std::vector<PropertyResult> properties;
    std::vector<std::string> notes;

    bool all_passed() const;
    std::string to_string() const;
};

// Full property battery on one machine. Oracle-backed checks run only when
// the machine fits the enumeration bound; structural checks always run.
VerifyReport verify_machine(const Fsm& z, const VerifyOptions& opt);

// Hierarchy battery: execution agreement with the flattening, thinness,
// core/dimension invariance, maximization laws, plus the machine battery
// on the flattening.
VerifyReport verify_hfsm(const Hfsm& z, const VerifyOptions& opt);

// Random corpus of machines and hierarchies.
VerifyReport verify_random(const VerifyOptions& opt);

}  // namespace hfsmdec
