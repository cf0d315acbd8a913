#include <cstdio>

int main() {
    std::puts("hlog: command-line interface under construction");
    return 0;
}
