// Regenerates the shipped ledger file from the builtin ledger. Run after
// changing builtin_ledger():  make_ledger data/ledger.json

#include <fstream>
#include <iostream>

#include "qphi/ledger.hpp"

int main(int argc, char** argv) {
    const std::string path = argc > 1 ? argv[1] : "data/ledger.json";
    std::ofstream out(path);
    if (!out) {
        std::cerr << "cannot write " << path << '\n';
        return 1;
    }
    out << qphi::ledger_to_json(qphi::builtin_ledger()).dump(2) << '\n';
    std::cout << "wrote " << path << '\n';
    return 0;
}
