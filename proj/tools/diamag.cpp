#include "diamag/runner.hpp"

int main(int argc, char** argv) { return diamag::run_main(argc, argv); }
