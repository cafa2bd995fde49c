// Generated by tools/gen_rs_coeffs.py; do not edit.

const C0_COEFFS: [f64; 47] = [
    3.8268343236508977172846e-1,
    0.0,
    4.372404680775204493602965e-1,
    0.0,
    1.323765754803435233240353e-1,
    0.0,
    -1.360502604767418865498319e-2,
    0.0,
    -1.356762197010358088791567e-2,
    0.0,
    -1.623725323144465282854625e-3,
    0.0,
    2.970535373337969078312728e-4,
    0.0,
    7.94330087952146958801639e-5,
    0.0,
    4.65561246145045050370634e-7,
    0.0,
    -1.432725163095510575408246e-6,
    0.0,
    -1.035484711231294607500742e-7,
    0.0,
    1.235792708386173805612576e-8,
    0.0,
    1.788108385795490498566678e-9,
    0.0,
    -3.391414389927035906940622e-11,
    0.0,
    -1.632663390256590510137405e-11,
    0.0,
    -3.785109318541220382854647e-13,
    0.0,
    9.327423259201724845662321e-14,
    0.0,
    5.221843015978136855313893e-15,
    0.0,
    -3.35067307274426378951509e-16,
    0.0,
    -3.412426522811726494080987e-17,
    0.0,
    5.751203341432399160339502e-19,
    0.0,
    1.489530136321150545475628e-19,
    0.0,
    1.256537271702141685330428e-21,
    0.0,
    -4.721295250143425668953988e-22,
];
const C1_COEFFS: [f64; 48] = [
    0.0,
    2.68251026283753470299914e-2,
    0.0,
    -1.378477342635185304987045e-2,
    0.0,
    -3.849125048223508222873642e-2,
    0.0,
    -9.871066299062076472012147e-3,
    0.0,
    3.310759760858404332909077e-3,
    0.0,
    1.464780857795415082497797e-3,
    0.0,
    1.320794062487696367516145e-5,
    0.0,
    -5.9227487018471413232235e-5,
    0.0,
    -5.980242585373448587710835e-6,
    0.0,
    9.641322456169826352672985e-7,
    0.0,
    1.833473372271441176001679e-7,
    0.0,
    -4.467087562717833599560794e-9,
    0.0,
    -2.709635082177274321692628e-9,
    0.0,
    -7.785288654315851046294823e-11,
    0.0,
    2.343762601089368853248455e-11,
    0.0,
    1.583017278998752164216223e-12,
    0.0,
    -1.211994157372379124664634e-13,
    0.0,
    -1.458378116110830701758285e-14,
    0.0,
    2.878630525813191750455821e-16,
    0.0,
    8.662862902123724122528253e-17,
    0.0,
    8.430722727137041271560023e-19,
    0.0,
    -3.630807223097346200173246e-19,
    0.0,
    -1.162669821283829671941389e-20,
    0.0,
    1.097548671152753181590183e-21,
];
const C2_COEFFS: [f64; 51] = [
    5.188542830293168493784582e-3,
    0.0,
    3.094658388063474603345674e-4,
    0.0,
    -1.133594107822937338218244e-2,
    0.0,
    2.233045741958144772057126e-3,
    0.0,
    5.196637408862330205116927e-3,
    0.0,
    3.439914407620833669465591e-4,
    0.0,
    -5.910648427470582821732252e-4,
    0.0,
    -1.022997254793585745442787e-4,
    0.0,
    2.08883922169927554080733e-5,
    0.0,
    5.927665493096535957891996e-6,
    0.0,
    -1.64238383624362759776903e-7,
    0.0,
    -1.516119970094068286173461e-7,
    0.0,
    -5.90780369820666796292279e-9,
    0.0,
    2.091151485947818897774556e-9,
    0.0,
    1.78156495832923510537997e-10,
    0.0,
    -1.616407245535383075285577e-11,
    0.0,
    -2.380696249666761570721074e-12,
    0.0,
    5.398265295542594918182004e-14,
    0.0,
    1.975014219696951527330873e-14,
    0.0,
    2.333286873288263483104815e-16,
    0.0,
    -1.118751761004808020820048e-16,
    0.0,
    -4.164009488883767188501123e-18,
    0.0,
    4.446081109291883028903044e-19,
    0.0,
    2.854611478363714454573387e-20,
    0.0,
    -1.191323143003789430497185e-21,
    0.0,
    -1.29816343607364989467099e-22,
];
const C3_COEFFS: [f64; 52] = [
    0.0,
    1.339716090719456904269836e-3,
    0.0,
    -3.744215136379393704664162e-3,
    0.0,
    1.330317891932146812031855e-3,
    0.0,
    2.265466076547178711476032e-3,
    0.0,
    -9.548499998506730415112255e-4,
    0.0,
    -6.010038458963603912075806e-4,
    0.0,
    1.012885828677662195334435e-4,
    0.0,
    6.865733449299825642457428e-5,
    0.0,
    -5.985366791538598159305934e-7,
    0.0,
    -3.331659851239947129043554e-6,
    0.0,
    -2.191928910243508105718484e-7,
    0.0,
    7.890884245681494410555248e-8,
    0.0,
    9.414685081295262151652465e-9,
    0.0,
    -9.570116210883480301880723e-10,
    0.0,
    -1.876313745347066279681297e-10,
    0.0,
    4.437837679323399327464709e-12,
    0.0,
    2.242673850561735324841107e-12,
    0.0,
    3.627686865735243689408256e-14,
    0.0,
    -1.763980955082158160783112e-14,
    0.0,
    -7.960765246786777757290345e-16,
    0.0,
    9.419651490589690763914895e-17,
    0.0,
    7.133103854569657824556668e-18,
    0.0,
    -3.289910584554624321179665e-19,
    0.0,
    -4.180730374898459291362925e-20,
    0.0,
    5.550542071646333789782116e-22,
    0.0,
    1.787044190626012385871764e-22,
];
