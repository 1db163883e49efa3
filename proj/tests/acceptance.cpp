// Acceptance gate: runs every self-test check and prints one PASS/FAIL line
// per criterion. Exits nonzero if any criterion fails.

#include <iostream>

#include <fsc/selftest.hpp>

int main() {
    fsc::selftest::Options opt;
    opt.recipes_dir = FSC_RECIPES_DIR;
    return fsc::selftest::run(opt, std::cout);
}
