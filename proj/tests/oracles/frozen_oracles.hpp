// Generated by tests/oracles/make_oracles.py. Do not edit.
#pragma once
#include <array>
#include <vector>

namespace oracle {

struct TTestCase { std::vector<double> a, b; double t, p; };
inline const std::vector<TTestCase>& ttest_cases() {
  static const std::vector<TTestCase> cases = {
    {{0.4249635402269834, 0.4136112700831908, 0.2811130090903112, 0.19950235664176363, 0.3655326930573907},
     {0.3647906204173187, 0.346932079438029, 0.23569793892591567, 0.18217413514948683, 0.28553095931047334},
     5.0351929198363035, 0.007306732966057356},
    {{0.5168450880465844, 0.24195406181489265, 0.16588035488729402, 0.26933008578461226, 0.19710708943234406, 0.37227026159816407, 0.11930575896688768, 0.2906303719214367},
     {0.4232839815899775, 0.27796824960728733, 0.19380353587981627, 0.263543121003092, 0.25799814378048264, 0.36875091126951887, 0.11008840374398074, 0.28086313106942906},
     -0.022914220780540808, 0.9823582061580514},
    {{0.23657654953677063, 0.3871556168547234, 0.3843089810292744, 0.2875274246177478, 0.36388232529702147, 0.3856349346031607, 0.2197012772179906, 0.21901926366667068, 0.3834103904032626, 0.3488340903974222, 0.305002111793199, 0.3039259014063986},
     {0.20114860941080853, 0.26341695878472604, 0.36538175542587453, 0.2285449282305415, 0.3547197480562295, 0.36555123703846104, 0.15729993872513257, 0.2354693769067622, 0.3655312633598784, 0.34934947931680516, 0.3179375203445209, 0.26513824706576605},
     2.6483757930766925, 0.022651975277933025},
    {{0.4288057083096461, 0.5621470955620463, 0.31913295657044616, 0.2789933540256663, 0.5302011480895086, 0.41511839431796255, 0.19696322187394688, 0.35094497546078973, 0.47354284762838456, 0.1885379350486634, 0.3395913839551351, 0.3877277402817733, 0.38579838133794037, 0.48642084261006163, 0.4219685780900718},
     {0.42398231036475953, 0.3221407058778127, 0.26182334410539554, 0.15488800322538535, 0.38189569572581017, 0.3210459081275697, 0.23686863531742042, 0.38614358218902245, 0.4574228717601692, 0.13683467733971835, 0.35903271438221834, 0.38458533849511833, 0.35805286755607, 0.460176198722584, 0.3625378138901121},
     2.5914775918774557, 0.02132807674547974},
    {{0.2848809741361297, 0.3086544258263675, 0.14410464372398968, 0.08037421101959034, 0.09694077681548781, 0.4018156545788197, 0.36050279045054856, 0.20028076388809268, 0.12906763359062304, 0.2674450854446538, 0.35909394050698007, 0.4148696037131472, 0.16252541480827842, 0.41632256422697367, 0.46849222154454484, 0.268939560007974, 0.32674464211475507, 0.2886849418260226, 0.28961868879221275, 0.5322581567091813},
     {0.3072571247367232, 0.29612364143608405, 0.23822915568411113, 0.21676034675593492, 0.10890837249988344, 0.42674883483332804, 0.31954713300432025, 0.33695175726456783, 0.1282640641493254, 0.37511567758062925, 0.29119739488816077, 0.3968344068648961, 0.23138268537354756, 0.3998357134611044, 0.4439397480731333, 0.2830438684613855, 0.26954716330703865, 0.2599705108018965, 0.31356298005487143, 0.5739998192801194},
     -1.5381220905061972, 0.14050650266029824},
    {{0.3275778680205566, 0.25595867686075474, 0.0798631769316599, 0.21397645150318517, 0.06332569317124818, 0.36725449679254657, 0.3826672187037171, 0.3567660005852319, 0.43477026619132825, 0.26927486008649215, 0.3017638354243078, 0.2509079051746812, 0.5219785962066519, 0.30131483404639064, 0.18364520284808028, 0.31770777692282975, 0.3727860965867391, 0.3239302178087, 0.14680899247288492, 0.38133242585504207, 0.5262740865163832, 0.4354391883758847, 0.15066978484973018, 0.23705396741523344, 0.5325716659639929},
     {0.3735178675914672, 0.23897773657091437, 0.03771578568953271, 0.2630337617946138, 0.12600814960762102, 0.40165156295222487, 0.31052303159657846, 0.3585470859444888, 0.4173063691912311, 0.29668559534192007, 0.29826618003386435, 0.3447325584152967, 0.5388667934317045, 0.2791435060596671, 0.25832813580448627, 0.3128204338914615, 0.375547133971624, 0.27780773078143106, 0.27201039283688977, 0.38336877559504834, 0.5048601509687792, 0.4357719478907982, 0.12900751101989633, 0.29368145112176136, 0.4360304215334111},
     -0.8971029299685813, 0.378575256968923},
    {{0.4173798710591722, 0.4527247363549918, 0.5951674831890604, 0.3792039270695293, 0.5439148386128365, 0.19850779269348734, 0.5325703738840583, 0.4610863165571827, 0.25495217100349243, 0.3035732347238914, 0.4520567006583682, 0.4347727564362095, 0.47343881247750547, 0.39932474033727056, 0.390445016040613, 0.41608597127605323, 0.43656528392879546, 0.32053725019108686, 0.24780364732010635, 0.36091832582405453, 0.45394717575852683, 0.17920891936416977, 0.4019804628579215, 0.5162013280742124, 0.3181842546826949, 0.3127091551834645, 0.4094436367813455, 0.3322763855111654, 0.4026949372182242, 0.5404067011684496},
     {0.40193382310333714, 0.33724143065170503, 0.422893563002274, 0.26396008740284616, 0.4026167735191134, 0.19409618149090507, 0.4601033827736779, 0.40058469423402543, 0.21099992432265213, 0.21338511519118053, 0.36299027472278944, 0.3021017224370476, 0.4134766630087317, 0.2989929467601912, 0.321410040724816, 0.2968006157924013, 0.30556825043774655, 0.2244604426054851, 0.18345188648808108, 0.3581136957440591, 0.3304782928397422, 0.14349498990167872, 0.2554211224470541, 0.4061908409703703, 0.3005625459809572, 0.18961270696327276, 0.3299109150746018, 0.20995103584175723, 0.26306671166805506, 0.42603412171931343},
     10.944848198123292, 8.188544698385797e-12},
    {{0.3275773055134192, 0.278789026979807, 0.1584173737259632, 0.2502487527073848, 0.23733220167543317, 0.2059405749260338, 0.3149363440854501, 0.20215083219628582, 0.09445647916108083, 0.31470491571926157, 0.20993000419405158, 0.3380181872626049, 0.2374881257886929, 0.20862558946662835, 0.1377487008182023, 0.22176382508134945, 0.3999524269471645, 0.09046968932773805, 0.4041583368748255, 0.2902330449739186, 0.09235355716978488, 0.38546442786044866, 0.2700647393314871, 0.16144015292948027, 0.23529080602028896, 0.3008649908280897, 0.3019426964877313, 0.013943865672765052, 0.19450684728498707, 0.05919563424492672, 0.37951928006575075, 0.24902213603839923, 0.4935190988535579, 0.26263596382835985, 0.18831807359430058, 0.2768386722327396, 0.5331743817121553, 0.24065618386441917, 0.3732443060056865, 0.4613107975111477},
     {0.344073127283388, 0.3331954348380299, 0.23425802730182582, 0.23181622597956136, 0.29399944677364886, 0.2984254810032507, 0.4185790057896931, 0.18742369394524908, 0.1949628119820464, 0.3690327185616221, 0.2871822906918625, 0.37943205066391095, 0.31255000445355174, 0.22615458881027548, 0.1495707521319882, 0.21273151258637085, 0.40413031437190494, 0.21841758153931884, 0.3595935995651938, 0.3823002586890409, 0.2616799246583438, 0.4603560428971077, 0.2553123253633458, 0.16908918372216208, 0.3145309887799634, 0.2993001933174768, 0.3570833646982004, 0.13323304874570174, 0.2594291056737468, 0.11145273548010873, 0.3572328399075676, 0.2516926035250865, 0.5042384918728772, 0.29878056074831627, 0.3336754006578374, 0.39932319936563226, 0.4920664541633879, 0.2353390987072589, 0.3866161400185827, 0.4129890003185316},
     -4.989724879053085, 1.293686620900899e-05},
    {{0.15554996740657667, 0.1532090181314773, 0.3053857177041757, 0.3430158864836328, 0.36635777274941317, 0.4208594869095603, 0.23913765670990758, 0.39060457800879145, 0.28768431419616647, 0.41565103725217534, 0.10840427846204978, 0.27697956612441843, 0.24556271023642764, 0.22578849090205355, 0.28731619978098283, 0.19221286175708202, 0.4878798521597643, 0.2722886910892542, 0.44738788749972624, 0.35043534664207304, 0.33485237085439973, 0.30886911412202855, 0.26733038804554066, 0.43012358811853535, 0.32353434972128975, 0.27637020975947907, 0.409823337850907, 0.2972217172524346, 0.2926252545373035, 0.09708324803994493, 0.3179538399887477, 0.26428888389488425, 0.2763827366412599, 0.39736779915967246, 0.36044254712753376, 0.3367118764721594, 0.28615949999963364, 0.35772721293272514, 0.3403626496264247, 0.43557932223149953, 0.39715080863099095, 0.29937706405123604, 0.39150453672852215, 0.4582469337469345, 0.36512847996093756, 0.34445828755054797, 0.21647185465493743, 0.358375249582895, 0.28702264845055625, 0.24917294910888488},
     {0.17113536061681994, 0.24909866931929525, 0.3056935867408892, 0.2906149326256466, 0.3232899133882416, 0.33961860420466405, 0.22892000388913303, 0.40623307343671455, 0.2082590882187506, 0.4180038981340673, 0.14751039333579657, 0.25856768804880026, 0.27420788904449206, 0.18819763749418966, 0.2975766203042309, 0.24222499397732472, 0.47186506077873236, 0.2825847934690263, 0.37719421661144226, 0.28575242513898924, 0.3456694755047754, 0.27194655714793164, 0.2849152587510627, 0.3786766315190595, 0.28196296366650686, 0.24272906489722162, 0.3691357560816766, 0.32661105743909313, 0.2916111894902524, 0.15665028565031208, 0.3748303013237953, 0.2361792968613108, 0.2100318212546461, 0.3391994781641285, 0.38252000343365883, 0.3423287365701602, 0.29653363245531944, 0.38168337138489794, 0.30373771665217647, 0.3769942348238393, 0.3230803942121856, 0.3427302437726548, 0.3875290009758832, 0.37155868395175634, 0.26023393404008155, 0.2948402507075212, 0.1555148308991195, 0.35178348720829544, 0.22330479765634592, 0.26267638904911217},
     2.583515888458617, 0.01281407269273864},
    {{0.1038064448664163, 0.19125168716812208, 0.3328916382296072, 0.17362209072032106, 0.18064833350033435, 0.38229373954843193, 0.38652978673514116, 0.3146034722916157, 0.3296846132182244, 0.16111851297232885, 0.16189075864506647, 0.5246039088214396, 0.283638834413297, 0.4662508859997564, 0.42659091643694463, 0.43115547954591726, 0.45310360156457435, 0.20948928463732022, 0.31984273094315546, 0.3012569998523628, 0.35033269821824115, 0.279694672530686, 0.3608892623621275, 0.13886218603081588, 0.2249530532409542, 0.25549286351344264, 0.37771341976060696, 0.35083138639068934, 0.23016617882090762, 0.39106587440900986, 0.31863821583213553, 0.27354927980048954, 0.3659470877608964, 0.33654342784594293, 0.444919427703229, 0.38345467723094867, 0.4584707995819658, 0.3224904674714345, 0.41170836074281847, 0.2717575350891849, 0.3690183429264414, 0.4713053350334751, 0.4579524636518658, 0.31263389624582816, 0.3539035423132045, 0.3763862970990016, 0.37055340545596327, 0.30577111790780254, 0.3057312420474439, 0.19100184097914677, 0.5487839868730235, 0.35282488877549373, 0.3672177906192604, 0.37171388477659606, 0.07962364910618548, 0.3279329060319189, 0.29049239175961183, 0.446730494175742, 0.41514018987819823, 0.37480898187718614, 0.2738185004684548, 0.20450940498475975, 0.2089259906499824, 0.35140477967196393},
     {0.07515588888248056, 0.17480886164467088, 0.28702572840201906, 0.22562388967768499, 0.21774833667776222, 0.4273825414538346, 0.4168632247333337, 0.3148210608776463, 0.3756753719794683, 0.14534456429930323, 0.1565638152406386, 0.5428961970185551, 0.2500182028703184, 0.41654998714562136, 0.3684895514194575, 0.41530545280441594, 0.3593943603099877, 0.15457961802773537, 0.30844757234248593, 0.2516948077714281, 0.4029573575164628, 0.3302924708996552, 0.3437772881090616, 0.12225953210265741, 0.16523978059653535, 0.26163549758955856, 0.3868029007627794, 0.2915291368795832, 0.2285046416663266, 0.3662930486160116, 0.3755204302147175, 0.3351931804758361, 0.3758940037614528, 0.34790073899103, 0.3780150714424565, 0.45290158886762677, 0.48119401492071023, 0.33818261859921195, 0.44811904710316924, 0.3193735536773644, 0.3158679028586861, 0.45964064831164403, 0.4225902749682824, 0.3176430279229008, 0.3008664501056754, 0.36598431657944935, 0.36661022900338486, 0.3397121236640888, 0.30986014557472563, 0.16607171944184293, 0.4604742914038921, 0.4634081964843192, 0.3848302109173068, 0.35385290189484603, 0.09466522049213882, 0.2552096628620899, 0.23782172435987342, 0.4305996221569445, 0.396617163813713, 0.3712526115904375, 0.3375322341536575, 0.2328659519195529, 0.18705157171612766, 0.41687631886073095},
     0.5401152138076497, 0.5910218409492394},
  };
  return cases;
}

struct WilcoxonCase { std::vector<double> a, b; double statistic, p; };
inline const std::vector<WilcoxonCase>& wilcoxon_cases() {
  static const std::vector<WilcoxonCase> cases = {
    {{0.0012301533574825742, 0.2987455375084699, -0.2741378553622176, -0.8905918387572742, -0.45467078517172255, -0.9916465549964624, 0.060143602597438485, 1.3402152455545335, -0.49220651855132963, -0.6204748998199404, 0.4898420501851982, 0.35688700816006075},
     {0.5066444023553811, -0.23172250719973475, 0.09661032217450893, 0.20471135570101362, -1.3988853324568045, -1.0492623160366805, -1.4410791372034055, 0.45067750576955745, -1.933941556343062, -0.45556603089462167, -0.37760443125850496, 1.0281513669817623},
     25.0, 0.30126953125},
    {{0.15675108662422516, -0.18693094462995438, -2.516759710820513, -0.5386928958466366, -0.048500945401071985, 0.11330898600330756, -1.5301357655053935, -0.47775327603393064, -0.9785190780566395, -0.8088372394255993, 1.0608986233860787, -0.8075346753318965, -0.0325217049455206, 0.8843898673831739, -0.583600432743302, -0.11170194958415963, 0.11046414324948059, 0.06378177425506196, -1.2250558264176934, 0.0761402303770081, 1.3588234217415376, -1.5471446781284823, 0.8593826880215982, 0.11935402569658124, -0.6414703941072214, 2.000416546342423, 0.7622597120847118, -1.1992889021052233, 0.07451622877146342, 0.5766895836701853},
     {-0.23203103872652414, 0.2959793225652516, -2.783277030969929, -0.07144533501230871, 1.19002164625508, -0.7623532650023453, -1.5269971551157846, -1.1410608525723458, -1.0512506668308088, -2.196031767275739, 0.2815970268834054, -1.2037306481363932, 0.666242167154887, 1.829611874837306, -2.107128225227557, -1.1063443155712092, 0.5573675658229024, -2.1286380099194324, -1.8882256913700604, -0.22114669529308092, 2.4158383990283574, -1.0577407775577268, 0.33216926779940037, -0.44922186840337786, -1.0916657946251465, 3.323945946798583, 0.13423476951184454, -1.7029692904699527, 0.22710529605672874, 0.25591913858373017},
     170.0, 0.20540969260036945},
    {{-0.2, -1.1, -0.0, -0.4, 1.2, 0.7, -0.0, 0.7, -0.3, 1.1, -0.0, 0.6, -1.3, 0.3, -1.7, -2.0, -0.3, -0.9, 0.2, 2.2, -0.8, -0.6, 0.2, 0.5, -0.2, -0.2, 0.7, 0.5, -1.0, -0.1, 0.0, -1.1, 0.3, -0.9, 1.0, 0.2, 0.1, -0.6, -0.1, -2.0, -1.1, 0.4, -2.1, 0.8, -1.7, 0.8, -0.8, 0.8, 0.1, -1.5, 1.2, 1.4, -0.1, -0.3, -0.2, -1.0, 1.1, -0.5, -0.1, -0.8, -0.6, -1.3, 1.3, -0.2, 1.0, 0.0, -0.7, -0.3, -0.6, 0.0},
     {-0.3, -1.1, -0.6, -0.7, 2.1, 0.5, -0.4, 1.0, 0.5, 0.5, -0.0, 0.4, -2.1, 0.8, -1.6, -1.9, -0.6, -0.6, 0.0, 2.2, -1.3, -1.1, 1.0, 0.3, 0.0, -0.1, 0.6, 0.3, -0.6, -0.2, 0.0, -1.0, 1.0, -0.5, 1.3, 0.0, -0.5, -0.0, 0.5, -2.0, -0.7, 0.9, -1.6, 1.4, -1.8, 1.7, -1.3, 1.3, 0.4, -1.0, 2.2, 2.2, -0.6, -1.0, 0.3, -1.4, 1.2, 0.0, -0.8, -1.8, -0.4, -1.2, 1.3, -0.1, 0.7, -0.7, -0.7, -0.7, -1.3, 0.4},
     903.5, 0.474021742527018},
    {{-0.061398628422175805, 0.40652853663281385, -0.9892949414259369, -0.6580587918366578, -0.9990430272201656, -0.8866418670580481, 0.19540791774940214, -0.7829746163349458, 0.3560662888202746, 0.3397559254182162, 2.0251609868801026, -1.3927890458668095, 0.8879023778350454, -0.0894879618884183, -0.01402973013099694, -1.4498638219066111, -0.4601938127246543, 0.743197263443954, -0.08247837201730518, 0.08105437041126562, -0.29071668060054134, 1.1545697469862868, -0.021472567043494796, -2.200415672482062, -0.6920725504744906, -1.968796607080243, -3.2514384154965383, -0.5301153497723121, 1.3335598501027237, 0.04711990613059292, -1.1725457074049794, -0.9406998682024224, 1.1306132302500087, 0.15762662339846478, 0.04799924156205696, -0.05346178883805718, 0.038400261555346496, 0.8054056469437983, 0.5525672973560755, 0.21570470002449457, -1.0428683575900106, 0.511108764909727, -0.6842470779924941, 1.0938456759004787, -1.2710508217241274, -0.13762097627558853, -0.007358286291270949, -1.3246455506441366, 1.721971643856479, 1.4604067672595522, -0.46358376160908316, 0.7717211655645232, 0.37867606967021183, -2.613559463345258, 0.2503980162775905, -0.061344079833248494, 0.08321735347453037, -1.0768749198271783, -0.2693470462204049, -0.17825876338229713, 1.1880942172123188, 0.33442706039101433, -0.005555030202663769, 1.5289699979109401, -0.5552479297636472, -0.3894303048753847, -1.8167550113390598, 1.5691058462836123, 0.9643323681944285, 0.9168480445117076, 0.6688984464469374, 0.110148587663652, 0.21548893918232892, -0.2520065902673078, -0.20360042572294623, 0.05430361171369427, 1.5118295115637772, 0.5556879018080786, -0.058460125758861455, -0.5793920504433961},
     {-0.6463971158338353, 2.0592335478053037, -0.432607637198833, -0.5405082335260032, -1.2952248693728883, -1.945695278758576, 0.1785463602795061, 0.1406834181352552, 0.01352904198278454, 0.16251334241765608, 1.854126635441124, -1.233194677868641, -0.6551085009105635, -0.2748863138535093, -0.8184252482850684, -0.5152787893440057, -1.180792489289514, 1.3702440107446496, 1.491959080709455, -0.18254189087035988, -0.8422929327240074, 1.3960020061123797, 0.026498405347476592, -3.1440320198217733, -0.18115313476111106, 0.09671944639516483, -3.4595504107622626, -0.6829915458369753, 0.338627826533638, 0.4162083578171405, -2.3695219321126073, -1.997630892553906, 2.4602805020937986, -0.6978264359961793, 1.1793568108933952, 1.52089621494475, 0.3477267190320893, 1.408797049794622, 2.5548182410428537, 0.06897629795877794, -1.5858741545316262, -0.7921222998732147, -0.5925399976461477, 2.622989886818785, -0.26145544032326207, -1.0297122176935458, -0.812733670123867, -1.7788167799851002, 2.0642397263518206, 1.3050953401558685, -0.1991298161660019, 1.1184605436099706, 0.12990248299176432, -2.6037334049482017, 0.5069903934936246, -0.09531378336642451, 0.6367382184685813, 0.8440008535008265, 0.3726252385504257, -0.07244821697374527, -0.44802440614959593, 0.772384146406216, -1.902233441969871, 0.16993591175481826, 0.34939132270511797, 0.3668047552612796, -1.9166940096879446, -0.09090525986860332, 0.6429838513035782, 0.28810972629568365, 1.3557391925771476, 2.4178791200911833, 0.48241942713698477, -0.9813177182994246, -1.3241519560261663, 0.04820933094542165, 1.3850363180501895, -0.545831257719393, 0.10789510993332274, -1.6803055717542579},
     1585.0, 0.8666855110052303},
  };
  return cases;
}

struct GreatCircleCase { double lat1, lon1, lat2, lon2, km; };
inline constexpr std::array<GreatCircleCase, 5> great_circle_cases = {{
    {0.0, 0.0, 0.0, 1.0, 111.19492664455873},
    {40.7128, -74.006, 51.5074, -0.1278, 5570.222179737958},
    {-33.8688, 151.2093, 35.6762, 139.6503, 7825.818616516156},
    {89.0, 10.0, -89.0, -170.0, 20015.086796020572},
    {36.1699, -115.1398, 36.1147, -115.1728, 6.815827491741625},
}};

inline constexpr std::array<double, 3> adam_grads = {0.5, -0.3, 0.8};
inline constexpr std::array<double, 3> adam_theta_trace = {0.900000002, 0.8808501989417752, 0.8204965636828663};

}  // namespace oracle
