# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled twin of the trail-packing kernel.

Mirrors _kernel_py.find_trail_system exactly: same enumeration order, same
node counting, identical results.  See that module for the semantics.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc

FOUND = 1
NONE = 0
BUDGET = -1


cdef class _Solver:
    cdef int n, k, cap
    cdef int* adj_flat
    cdef int* adj_start
    cdef int* pa
    cdef int* pb
    cdef int* trail_buf
    cdef int* trail_len
    cdef int* wl
    cdef unsigned long long nodes, max_nodes
    cdef bint exhausted

    def __cinit__(self, adj, pairs, unsigned long long max_nodes):
        cdef int total = 0, u, i, j
        self.n = len(adj)
        self.k = len(pairs)
        self.max_nodes = max_nodes
        self.nodes = 0
        self.exhausted = False
        for u in range(self.n):
            total += 2 * len(adj[u])
        self.adj_flat = <int*> PyMem_Malloc(max(total, 1) * sizeof(int))
        self.adj_start = <int*> PyMem_Malloc((self.n + 1) * sizeof(int))
        j = 0
        for u in range(self.n):
            self.adj_start[u] = j
            for nbr, eid in adj[u]:
                self.adj_flat[j] = nbr
                self.adj_flat[j + 1] = eid
                j += 2
        self.adj_start[self.n] = j
        self.pa = <int*> PyMem_Malloc(max(self.k, 1) * sizeof(int))
        self.pb = <int*> PyMem_Malloc(max(self.k, 1) * sizeof(int))
        for i in range(self.k):
            self.pa[i] = pairs[i][0]
            self.pb[i] = pairs[i][1]
        # An edge-simple trail visits at most m+1 vertices; m <= total/2.
        self.cap = total // 2 + 2
        self.trail_buf = <int*> PyMem_Malloc(max(self.k * self.cap, 1) * sizeof(int))
        self.trail_len = <int*> PyMem_Malloc(max(self.k, 1) * sizeof(int))
        self.wl = <int*> PyMem_Malloc(max(self.k, 1) * sizeof(int))
        for i in range(self.k):
            self.trail_len[i] = -1
            self.wl[i] = 0

    def __dealloc__(self):
        PyMem_Free(self.adj_flat)
        PyMem_Free(self.adj_start)
        PyMem_Free(self.pa)
        PyMem_Free(self.pb)
        PyMem_Free(self.trail_buf)
        PyMem_Free(self.trail_len)
        PyMem_Free(self.wl)

    cdef unsigned int reach(self, unsigned long long m, int src):
        cdef unsigned int seen = (<unsigned int> 1) << src
        cdef int stack[32]
        cdef int sp = 1, u, w, eid, idx
        stack[0] = src
        while sp:
            sp -= 1
            u = stack[sp]
            for idx in range(self.adj_start[u], self.adj_start[u + 1], 2):
                w = self.adj_flat[idx]
                eid = self.adj_flat[idx + 1]
                if (m >> eid) & 1 and not (seen >> w) & 1:
                    seen |= (<unsigned int> 1) << w
                    stack[sp] = w
                    sp += 1
        return seen

    cdef bint later_pairs_connected(self, unsigned long long m, int i):
        cdef int j, a, b
        for j in range(i, self.k):
            a = self.pa[j]
            b = self.pb[j]
            if a != b and not (self.reach(m, a) >> b) & 1:
                return False
        return True

    cdef int extend(self, int i, unsigned long long m, int cur):
        cdef int b, w, eid, idx
        if self.max_nodes and self.nodes >= self.max_nodes:
            self.exhausted = True
            return 0
        self.nodes += 1
        b = self.pb[i]
        if cur == b:
            self.trail_len[i] = self.wl[i]
            if i + 1 == self.k:
                return 1
            if self.later_pairs_connected(m, i + 1):
                self.wl[i + 1] = 1
                self.trail_buf[(i + 1) * self.cap] = self.pa[i + 1]
                if self.extend(i + 1, m, self.pa[i + 1]):
                    return 1
            self.trail_len[i] = -1
            if self.exhausted:
                return 0
        if not (self.reach(m, cur) >> b) & 1:
            return 0
        for idx in range(self.adj_start[cur], self.adj_start[cur + 1], 2):
            w = self.adj_flat[idx]
            eid = self.adj_flat[idx + 1]
            if (m >> eid) & 1:
                self.trail_buf[i * self.cap + self.wl[i]] = w
                self.wl[i] += 1
                if self.extend(i, m & ~((<unsigned long long> 1) << eid), w):
                    return 1
                self.wl[i] -= 1
                if self.exhausted:
                    return 0
        return 0

    def run(self, unsigned long long mask):
        self.wl[0] = 1
        self.trail_buf[0] = self.pa[0]
        cdef int ok = self.extend(0, mask, self.pa[0])
        if ok:
            trails = tuple(
                tuple(self.trail_buf[i * self.cap + j] for j in range(self.trail_len[i]))
                for i in range(self.k)
            )
            return FOUND, trails, self.nodes
        return (BUDGET if self.exhausted else NONE), None, self.nodes


def find_trail_system(adj, pairs, unsigned long long mask, unsigned long long max_nodes=0):
    if len(pairs) == 0:
        return FOUND, (), 0
    solver = _Solver(adj, pairs, max_nodes)
    return solver.run(mask)
