#include <stdio.h>
#include "kunneth.h"
int main(void){ KnSurface *s=0; int64_t x=0;
if(kn_surface_new("P2",&s)!=KN_STATUS_OK) return 1;
KnStatus st=kn_euler_chi(s,"1,1,1/2",&x); printf("%d %lld\n",st,(long long)x);
st=kn_euler_chi(s,"oops",&x); printf("%d %s\n",st,kn_last_error());
kn_surface_free(s); return 0;}
