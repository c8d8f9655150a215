// Golden REPL transcripts for the example programs: inputs paired with
// expected outputs. Figures build on one another (later ones replay the
// definitions they need), mirroring one long interactive session.
#pragma once

#include <string>
#include <vector>

namespace corpus {

struct Line {
    const char* input;
    // Expected printed output without trailing newline.
    //   ""        -> silent statement
    //   "@ANY"    -> output not checked here (checked by a dedicated test)
    const char* expect;
};

using Transcript = std::vector<Line>;

inline const Transcript& fig1() {
    static const Transcript t = {
        {"x=2+.1;", ""},
        {"x *= 2;", ""},
        {"^x;", "4.2"},
        {"x='A'+1=='B';", ""},
        {"^x;", "true"},
        {"y=\"Hello \"+\"Worl\"+'d';", ""},
        {"^y;", "Hello World"},
        {"^y[0:1]+'i'+y[5:];", "Hi World"},
        {"fibe1(x,f2,f1,k) :  x==k?  f1: fibe1(x,f1,f1+f2,k+1);", ""},
        {"fibe(x) :  x <= 1?  x: fibe1(x,0,1,1);", ""},
        {"z=fibe(10);", ""},
        {"^z", "55"},
        {"^z@type", "int"},
    };
    return t;
}

// Functions on lists; the two-statement line of the original session is split
// into separate inputs. The clops figures and the full reversed lists are
// checked by the acceptance suite.
inline const Transcript& fig2() {
    static const Transcript t = {
        {"member(x,L): L !=[] && (x==L[.] || member(x,L[>]));", ""},
        {"listRev(L): L==[]? []: listRev(L[>])+[L[.]];", ""},
        {"rev1(L,R): L==[]? R: rev1(L[>],[L[.]|R]);", ""},
        {"rev(L): rev1(L,[]);", ""},
        {"range(x1,x2): x1>x2? []: [x1|range(x1+1,x2)];", ""},
        {"L1= range(1,1000);", ""},
        {"L2 = range(1,2000);", ""},
        {"^listRev(L1);", "@ANY"},
        {"!clops;", "@ANY"},
        {"^listRev(L2);", "@ANY"},
        {"!clops;", "@ANY"},
        {"^rev(L1);", "@ANY"},
        {"!clops;", "@ANY"},
        {"^rev(L2);", "@ANY"},
        {"!clops;", "@ANY"},
        {"merge(O1,O2): O1==[]? O2[:]:O2==[]? O1[:]: O1[.]<O2[.]? \n"
         "                [O1[.]|merge(O1[>], O2)]:  [O2[.]|merge(O1,O2[>])];",
         ""},
    };
    return t;
}

inline const Transcript& fig3() {
    static const Transcript t = {
        {"emps = [ { \"name\": \"e1\", \"age\": 30 },\n"
         "           { \"name\": \"e2\", \"age\": 32, \"projects\": [ \"p1\", \"p2\" ] },\n"
         "           { \"name\": \"e3\", \"age\": 28, \"projects\": [ \"p1\", \"p3\" ] } ];",
         ""},
        {"^emps[2][\"projects\"];", "[ \"p1\", \"p3\" ]"},
        {"^emps[0][\"projects\"] %", "null"},
    };
    return t;
}

inline const Transcript& fig4() {
    static const Transcript t = {
        {"map(L,f/1,m/1) : L==[]?[]: f(L[.])? [m(L[.])|map(L[>],f,m)]:  map(L[>],f,m);", ""},
        {"d2or3(x) : x%2==0 || x%3==0;", ""},
        {"^map(range(1,10),d2or3,lambda x: x*x*x);", "[ 8, 27, 64, 216, 512, 729, 1000 ]"},
        {"reduce(L,f/2,init) : L==[]? init: f(L[.],reduce(L[>],f,init));", ""},
        {"sum(x,y):x+y;", ""},
        {"prod(x,y):x*y;", ""},
        {"^reduce(map(range(1,10),d2or3, lambda x: x*x*x),sum,0);", "2556"},
        {"^reduce(map(range(1,10),lambda x:x%2==0&&x%3==0, lambda x:x*x),prod,1);", "36"},
        {"jsFilter(LJ,filtC/3,K,V): LJ==[]?[]:filtC(LJ[.],K,V)? \n"
         "    [LJ[.]|jsFilter(LJ[>],filtC,K,V)]: \n"
         "    jsFilter(LJ[>],filtC,K,V);",
         ""},
        {"select1KV(J,K,V): J[K]!=null && J[K]==V;", ""},
        {"^jsFilter(emps,select1KV,\"age\",28);",
         "[ { \"name\": \"e3\", \"age\": 28, \"projects\": [ \"p1\", \"p3\" ] } ]"},
        {"select1KinV(J,K,V) : J[K]!=null && member(V,J[K]);", ""},
        {"^jsFilter(emps,select1KinV,\"projects\",\"p1\") ;",
         "[ { \"name\": \"e2\", \"age\": 32, \"projects\": [ \"p1\", \"p2\" ] }, "
         "{ \"name\": \"e3\", \"age\": 28, \"projects\": [ \"p1\", \"p3\" ] } ]"},
    };
    return t;
}

inline const Transcript& higherOrderTwice() {
    static const Transcript t = {
        {"twice(f/1)/1: lambda x: f(f(x));", ""},
        {"^twice(lambda x: x+3)(7);", "13"},
    };
    return t;
}

// Local variables: rotate (reconstructed; the printed session truncates its
// definition) and quicksort.
inline const Transcript& fig5() {
    static const Transcript t = {
        {"rotate(L,k) : <n,k1> {! n=_len(L) !} L==[]? []: {! k1=k%n !} "
         "k1==0? L[:]: L[n-k1:]+L[:n-k1];",
         ""},
        {"^rotate([5,1,4,20,15,13], 3);", "[ 20, 15, 13, 5, 1, 4 ]"},
        {"^rotate([5,1,4,20,15,13 ],-4);", "[ 15, 13, 5, 1, 4, 20 ]"},
        {"part1(x,L,o/2,T0,T1) : L==[]?[T0,T1]: o(L[.],x)? \n"
         "      part1(x,L[>],o,[L[.]|T0],T1):  part1(x,L[>],o,T0,[L[.]|T1]);",
         ""},
        {"part(x,L,o/2) : part1(x,L,o,[],[]);", ""},
        {"quicksort(L,o/2) : <T01> L==[]? []: L[>]==[]? [L[.]]: \n"
         "  {! T01=part(L[.],L[>],o) !} \n"
         "  quicksort(T01[0],o)+[L[.]|quicksort(T01[1],o)];",
         ""},
        {"^quicksort([3,11,2,8,6,5], lambda x,y: x<=y);", "[ 2, 3, 5, 6, 8, 11 ]"},
    };
    return t;
}

// Global labeled variables (listDiv, swap) plus the upper-triangular solver.
// The solver's printed output is checked against a back-substitution oracle in
// the acceptance suite; MATH1.somma needs a numeric tolerance.
inline const Transcript& fig6() {
    static const Transcript t = {
        {"MATH: zeroD;", ""},
        {"div*(x,y): <MATH*>  {! zeroD=false !} y==0 ? 0 {! zeroD=true !}:x/y;", ""},
        {"MATH1: numErr, somma;", ""},
        {"listDiv1*(x,L): <MATH*, MATH1*,d>  L==[]? []:  \n"
         "  {!d=div(x,L[.]) !} zeroD? {! numErr+=1 !}  ['*' |listDiv1(x,L[>])]: \n"
         "  [d | listDiv1(x,L[>])] {!  somma+=d !};",
         ""},
        {"listDiv*(x,L):  <MATH1*> {! numErr=0 !} {! somma=0 !} listDiv1(x,L);", ""},
        {"^listDiv(4,[ 2, 0, -4, 0, 20 ]);", "[ 2.0, '*', -1.0, '*', 0.2 ]"},
        {"^MATH1.numErr;", "2"},
        {"^MATH1.somma;", "@ANY"},
        {"swap*(L,i,j):  <t> true  {! t=L[i] !} {! L[i]=L[j] !} {! L[j]=t !};", ""},
        {"K=[1,2,3,4];", ""},
        {"^swap(K,1,3);", "true"},
        {"^K;", "[ 1, 4, 3, 2 ]"},
        {"newVx_1(m,j) : j >=m? []: [0 | newVx_1(m,j+1)];", ""},
        {"newVx(m) : m <= 0? []: newVx_1(m,0);", ""},
        {"triangLS_sum(A,X,i,j,n1): j>n1? 0:  \n"
         "           A[i][j]*X[j]+triangLS_sum(A,X,i,j+1,n1);",
         ""},
        {"triangLS_1*(A,B,X,i,n1): i<0? X: A[i][i]==0? exc(\"matrix A singular\"): \n"
         "   {! X[i]=(B[i]-triangLS_sum(A,X,i,i+1,n1))/A[i][i] !}  \n"
         "   triangLS_1(A,B,X,i-1,n1);",
         ""},
        {"triangLS*(A,B): <n>{! n=_len(A) !} n!=_len(A[0])||n!=_len(B)? \n"
         "        exc(\"matrix A and vector B are not conformant\"): \n"
         "        triangLS_1(A,B,newVx(n),n-1,n-1);",
         ""},
        {"^triangLS([[1,2,-1],[0,2,4],[0,0,-2]],[-6.5,3.0,-1.5]);", "@ANY"},
    };
    return t;
}

inline const Transcript& fig7() {
    static const Transcript t = {
        {"giveBonus*(emps,value):emps==[]?true:emps[.][\"bonus\"]==null? \n"
         "    {! emps[0][\"bonus\"]=value !} giveBonus(emps[>],value):\n"
         "    {! emps[0][\"bonus\"]+=value !} giveBonus(emps[>],value);",
         ""},
        {"^giveBonus(jsFilter(emps,select1KinV,\"projects\",\"p1\"),100);", "true"},
        {"^emps;",
         "[ { \"name\": \"e1\", \"age\": 30 }, "
         "{ \"name\": \"e2\", \"age\": 32, \"projects\": [ \"p1\", \"p2\" ], \"bonus\": 100 }, "
         "{ \"name\": \"e3\", \"age\": 28, \"projects\": [ \"p1\", \"p3\" ], \"bonus\": 100 } ]"},
    };
    return t;
}

// The whole session in order; figures 4 and 7 depend on earlier definitions.
inline std::vector<const Transcript*> fullSession() {
    return {&fig1(), &fig2(), &fig3(), &fig4(), &higherOrderTwice(),
            &fig5(), &fig6(), &fig7()};
}

}  // namespace corpus
