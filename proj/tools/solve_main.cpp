#include <cstdio>

#include "transonic/version.hpp"

int main(int argc, char** argv) {
    (void)argc;
    (void)argv;
    std::printf("transonic %s\n", transonic::kVersion);
    return 0;
}
